#pragma once

#include <cstddef>
#include <vector>

#include "coreset_lab/core.hpp"
#include "coreset_lab/sampler.hpp"
#include "coreset_lab/seeding.hpp"

// Measurement instruments for the quantities the coreset analysis reasons
// about. Constants and interval conventions are literal, not tuned:
//   far            cost(a_j,S) > Delta_j / eps^2   (k-median: >= Delta_j / eps)
//   low cost       close and cost(C_j,A) < T,  T = eps^3 cost(P,A) / k
//   band b         cost(C_j,A) in [2^b T, 2^(b+1) T),          0 <= b <= b_max
//   type t         cost(a_j,S) in [2^(t-1) Delta_j, 2^t Delta_j), type 0 below Delta_j
//   ring l         cost(p,a_j) in [2^l Delta_j, 2^(l+1) Delta_j), ring 0 below 2 Delta_j,
//                  ring l_max+1 at or above 2^(l_max+1) Delta_j

namespace coreset_lab {

struct StructureParams {
    double eps = 0.0;
    Objective objective = Objective::kmeans;
    double far_factor = 0.0;  // eps^-2 (k-means) or eps^-1 (k-median)
    double T = 0.0;
    int b_max = 0;
    int t_max = 0;
    int l_max = 0;
};

StructureParams structure_params(const ApproxSolution& A, double eps, Objective objective);

struct ClusterClass {
    double center_cost = 0.0;  // cost(a_j, S)
    bool far = false;
    bool low_cost = false;
    int band = -1;  // -1 unless close and high cost
    int type = -1;  // -1 for far clusters
};

struct StructureReport {
    StructureParams params;
    std::vector<ClusterClass> clusters;
    std::vector<int> ring;  // per point

    /// Clusters of B_{b,t}(S).
    std::vector<std::size_t> group(int band, int type) const;
    /// The (band, type) pair with the most clusters; (-1, -1) when none exist.
    std::pair<int, int> largest_group() const;
};

StructureReport classify_structure(const Dataset& P, const ApproxSolution& A, const Solution& S,
                                   double eps);

int ring_index(double cost, double delta, int l_max);

/// A cluster interacts with center x when cost(a_j,x) >= 32 Delta_j and
/// cost(a_j,x) <= 16 cost(a_j,S).
bool interacts(double cost_aj_x, double delta_j, double cost_aj_S);

struct InteractionReport {
    int band = -1;
    int type = -1;
    std::size_t group_size = 0;                  // k_{B(S)}
    std::vector<std::vector<std::size_t>> sets;  // I(x_i)
    std::vector<std::size_t> signature;
    std::size_t N = 0;
    int class_r = -1;  // floor(log2 N), -1 when N == 0
};

InteractionReport interaction_profile(const Dataset& P, const ApproxSolution& A, const Solution& S,
                                      const StructureReport& structure, int band, int type);

struct EventEReport {
    struct SizeCheck {
        std::size_t cluster;
        double weighted;
        double size;
        double rel_dev;
        double margin;  // eps |C_j| - |weighted - |C_j||
        bool pass;
    };
    struct RingCheck {
        std::size_t cluster;
        int ring;
        double weighted;
        double bound;  // |C_j| / 2^(l-1)
        double margin;
        bool checked;  // ring 0 is reported but not checked
        bool pass;
    };
    struct CostCheck {
        std::size_t cluster;
        double weighted_cost;
        double cost;
        double rel_dev;
        double margin;
        bool pass;
    };

    double eps = 0.0;
    std::vector<SizeCheck> p1;
    std::vector<RingCheck> p2;
    std::vector<CostCheck> p3;
    bool p1_pass = true;
    bool p2_pass = true;
    bool p3_pass = true;
    bool pass = true;
};

EventEReport check_event_e(const Dataset& P, const ApproxSolution& A, const Coreset& omega,
                           double eps);

struct WeightBoundViolation {
    std::size_t entry;
    double weight;
    double bound;
    int binding_term;  // 0..3, the minimizing term of the four-way bound
};

/// Entries whose weight exceeds 4 min(k|C_j|/m, k cost(C_j,A)/(m cost(q,A)),
/// cost(P,A)/(m cost(q,A)), cost(P,A)/(m Delta_q)); zero denominators skip their term.
std::vector<WeightBoundViolation> check_weight_bounds(const Dataset& P, const ApproxSolution& A,
                                                      const Coreset& omega);

struct SeparationViolation {
    std::size_t i, j;
    double cost;   // cost(a_i, a_j)
    double bound;  // beta OPT_k / (2 min(|C_i|, |C_j|))
    double slack;  // cost - bound
};

/// Pairwise center separation of a near-optimal k-means clustering of a
/// beta-stable instance; centers are the cluster centroids.
std::vector<SeparationViolation> check_separation(const Dataset& P, const Clustering& clustering,
                                                  double beta, double opt_k);

/// cost(P,S)/OPT_k against max(1, (N/k - 1) beta / 768). Reported only.
struct StabilityProbe {
    double cost_ratio = 0.0;
    double predicted_floor = 0.0;
};

StabilityProbe stability_probe(double cost_S, double opt_k, std::size_t N, std::size_t k,
                               double beta);

}  // namespace coreset_lab
