#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coreset_lab/core.hpp"
#include "coreset_lab/instances.hpp"
#include "coreset_lab/sampler.hpp"
#include "coreset_lab/seeding.hpp"

namespace coreset_lab {

/// Sum of w * cost(q, S) plus the offset. `space` is required in finite-matrix mode.
double estimate_cost(const Coreset& omega, const Solution& S, const Dataset* space = nullptr);

/// cost(P,S) = 0 leaves the coreset ratio undefined.
class ZeroCostError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

double relative_error(const Dataset& P, const Coreset& omega, const Solution& S);
double relative_error(double true_cost, double estimate);

enum class Family {
    random_data_points,
    random_box,
    lloyd_random_restarts,
    perturb_A,
    drop_one_center,
    adversarial_simplex,
};

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);
/// Comma-separated family list.
std::vector<Family> parse_families(std::string_view list);

struct CandidateSpec {
    struct Entry {
        Family family;
        std::size_t count;  // drop_one_center ignores it and yields k solutions
    };
    std::vector<Entry> families;
    double perturb_scale = 0.1;  // multiples of sqrt(Delta_j) (k-means) or Delta_j (k-median)
    std::uint64_t seed = 1;
    int lloyd_iters = 10;

    static CandidateSpec uniform(const std::vector<Family>& families, std::size_t count,
                                 std::uint64_t seed);
};

struct Candidate {
    Solution centers;
    Family family;
};

/// Candidate solutions of A.k() centers each. adversarial_simplex draws random
/// basis subsets per block and needs a simplex tag.
std::vector<Candidate> generate_candidates(const Dataset& P, const ApproxSolution& A,
                                           const CandidateSpec& spec,
                                           const InstanceTag* tag = nullptr);

/// Candidates with their true costs, computed once.
struct CandidatePool {
    std::vector<Candidate> candidates;
    std::vector<double> costs;
};

CandidatePool make_pool(const Dataset& P, std::vector<Candidate> candidates);

struct SupError {
    double max = 0.0;
    double mean = 0.0;
    std::size_t argmax = npos;
    Family family = Family::random_data_points;
    std::size_t evaluated = 0;
    std::vector<std::size_t> skipped;  // zero-cost candidates
};

SupError sup_error(const Dataset& P, const Coreset& omega, const std::vector<Candidate>& candidates);
SupError sup_error(const Dataset& P, const Coreset& omega, const CandidatePool& pool);

/// s = sum p / ||sum p|| over the distinct entries, which must be standard basis vectors.
std::vector<double> adversarial_center(const Coreset& omega);

/// One adversarial center per simplex block, built from the entries of that
/// block; blocks without entries get their centroid.
Solution adversarial_solution(const Coreset& omega, const InstanceTag& tag);

enum class BetaMode { exact, heuristic };

std::string_view to_string(BetaMode mode);
BetaMode beta_mode_from_string(std::string_view name);

struct BetaEstimate {
    double beta = 0.0;  // +inf when opt_k = 0 < opt_{k-1}
    double opt_k = 0.0;
    double opt_k_minus_1 = 0.0;
    BetaMode mode = BetaMode::exact;
    std::string note;
};

BetaEstimate estimate_beta(const Dataset& P, std::size_t k, BetaMode mode, const SeedConfig& cfg);

struct SweepConfig {
    std::vector<Algorithm> algorithms;
    std::vector<std::size_t> m_list;
    std::size_t trials = 1;
    double eps = 0.2;  // event E parameter
    std::uint64_t seed = 1;
    /// Append the per-coreset simplex attack (needs a simplex tag).
    bool adaptive_attack = false;
};

struct ErrorRow {
    std::size_t m = 0;
    std::size_t trial = 0;
    Algorithm algorithm = Algorithm::sensitivity;
    Family family = Family::random_data_points;  // family of the sup witness
    double sup_rel_error = 0.0;
    double mean_rel_error = 0.0;
    bool evente_pass = false;
    double wall_time_s = 0.0;
    std::size_t distinct_points = 0;
};

using ErrorTable = std::vector<ErrorRow>;

/// Rows ordered by (algorithm, m, trial). Trial t at size m draws with the
/// same seed for every algorithm.
ErrorTable sweep(const Dataset& P, const ApproxSolution& A, const CandidatePool& pool,
                 const SweepConfig& cfg, const InstanceTag* tag = nullptr);

double median(std::vector<double> values);

struct ScalingFit {
    std::vector<double> m;
    std::vector<double> median_sup;
    double slope = 0.0;  // least squares on log m vs log median
};

ScalingFit scaling_fit(const ErrorTable& table, Algorithm algorithm);

}  // namespace coreset_lab
