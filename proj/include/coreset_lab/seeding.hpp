#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coreset_lab/core.hpp"

namespace coreset_lab {

struct SeedConfig {
    int lloyd_max_iters = 100;
    double lloyd_rel_tol = 1e-9;
    int local_search_budget = 0;  // swap attempts, 0 disables
    int restarts = 5;
    std::uint64_t rng_seed = 1;
    /// k-median: medoid updates instead of Weiszfeld steps.
    bool medoid_updates = false;
    int weiszfeld_max_iters = 50;
    double weiszfeld_rel_tol = 1e-10;
};

/// Reference solution A with its clustering and per-cluster average costs.
struct ApproxSolution {
    Solution centers;
    Clustering clustering;
    std::vector<double> delta;  // cost(C_j, A) / |C_j|, 0 for empty clusters

    std::size_t k() const { return centers.k(); }
    double total() const { return clustering.total; }
    const std::vector<double>& point_costs() const { return clustering.point_costs; }
    std::uint64_t digest() const;
};

/// D^power seeding: first center uniform, each next drawn proportionally to
/// the current cost. power must be 2 for squared-Euclidean and 1 for
/// Euclidean data; finite metrics accept either.
Solution d2_seed(const Dataset& P, std::size_t k, int power, std::uint64_t seed);

struct LloydResult {
    Solution centers;
    Clustering clustering;
    std::vector<double> history;  // total cost before the first and after every iteration
    int iterations = 0;
};

/// Alternating assignment / center update. Centroid updates for k-means,
/// guarded Weiszfeld or medoid updates for k-median, medoids for finite
/// metrics. Empty clusters are re-seeded at the current farthest point.
LloydResult lloyd(const Dataset& P, Solution S0, const SeedConfig& cfg);

/// Random single-swap local search; swaps replace one center by an input point.
Solution local_search(const Dataset& P, Solution S, int budget, std::uint64_t seed);

/// Best of cfg.restarts runs of d2_seed -> lloyd -> local_search. k-means
/// centers are snapped to the centroids of their final clusters.
ApproxSolution approx_solution(const Dataset& P, std::size_t k, const SeedConfig& cfg);

/// Fills an ApproxSolution for fixed centers (no updates).
ApproxSolution make_approx_solution(const Dataset& P, Solution centers);

/// Weiszfeld iterations for the geometric median of `members`, skipping
/// points coincident with the iterate.
std::vector<double> geometric_median(const Dataset& P, std::span<const std::size_t> members,
                                     int max_iters = 50, double rel_tol = 1e-10);

struct ExactOptimum {
    double opt = 0.0;
    Clustering clustering;
    Solution centers;
};

inline constexpr std::size_t kBruteForceMaxPoints = 14;

/// Exact OPT_k by enumerating every partition of P into at most k parts.
ExactOptimum brute_force_opt(const Dataset& P, std::size_t k);

}  // namespace coreset_lab
