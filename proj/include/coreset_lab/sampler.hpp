#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coreset_lab/core.hpp"
#include "coreset_lab/seeding.hpp"

namespace coreset_lab {

/// Importance distribution over P built from a reference solution A.
///
/// For p in cluster C_j the four summands are
///   1/(4k|C_j|),  cost(p,A)/(4k cost(C_j,A)),
///   cost(p,A)/(4 cost(P,A)),  Delta_p/(4 cost(P,A)),
/// where k counts the nonempty clusters of A. A cluster with zero cost
/// falls back to a uniform second term inside the cluster; a zero total
/// cost turns the last two terms into 1/(4n) each. Every family therefore
/// sums to 1/4.
struct SamplingDistribution {
    std::vector<double> mu;
    std::vector<std::array<double, 4>> terms;
    std::vector<bool> degenerate_clusters;  // cost(C_j, A) == 0 substitution
    bool degenerate_total = false;          // cost(P, A) == 0 substitution
    std::size_t effective_k = 0;
};

SamplingDistribution compute_mu(const Dataset& P, const ApproxSolution& A);

enum class Algorithm { sensitivity, uniform, offset };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

struct Coreset {
    MetricKind metric = MetricKind::squared_euclidean;
    WeightedSet entries;
    double offset = 0.0;
    std::size_t m = 0;  // draws
    std::string algorithm;
    std::uint64_t seed = 0;
    std::uint64_t approx_digest = 0;
    std::uint64_t dataset_digest = 0;

    std::size_t size() const { return entries.size(); }
    std::size_t distinct_points() const;
};

/// Inverse-CDF sampler over a fixed distribution. Draws are split into
/// fixed blocks, each with its own derived stream, so the sampled multiset
/// depends only on the seed.
class SensitivitySampler {
public:
    SensitivitySampler(const Dataset& P, const ApproxSolution& A);

    const SamplingDistribution& distribution() const { return dist_; }
    Coreset draw(std::size_t m, std::uint64_t seed) const;

    static constexpr std::size_t kBlock = 4096;

private:
    const Dataset& P_;
    SamplingDistribution dist_;
    std::vector<double> cumulative_;
    std::uint64_t approx_digest_;
    std::uint64_t dataset_digest_;
};

Coreset sensitivity_sample(const Dataset& P, const ApproxSolution& A, std::size_t m,
                           std::uint64_t seed);

/// m uniform draws with weight n/m each.
Coreset uniform_sample(const Dataset& P, std::size_t m, std::uint64_t seed);

/// The k centroids of A weighted by their cluster sizes, with offset cost(P,A).
/// Needs a k-means dataset whose A centers are the centroids of their clusters.
Coreset offset_coreset(const Dataset& P, const ApproxSolution& A);

/// Union of two coresets: entries concatenate, offsets and draw counts add.
Coreset merge(const Coreset& a, const Coreset& b);

/// Merges identical points by summing weights, in first-occurrence order.
Coreset compact(const Coreset& c);

}  // namespace coreset_lab
