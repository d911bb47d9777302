#include "coreset_lab/seeding.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include "coreset_lab/parallel.hpp"
#include "coreset_lab/random.hpp"

namespace coreset_lab {

std::uint64_t ApproxSolution::digest() const {
    Fnv1a h;
    h.add(static_cast<std::uint64_t>(centers.k()));
    for (double c : centers.coords()) h.add(c);
    for (std::size_t id : centers.indices()) h.add(static_cast<std::uint64_t>(id));
    for (std::size_t a : clustering.assignment) h.add(static_cast<std::uint64_t>(a));
    h.add(clustering.total);
    return h.value();
}

namespace {

double seeding_weight(const Dataset& P, std::size_t i, const Solution& S, std::size_t j,
                      int power) {
    if (P.is_finite()) {
        const double d = P.entry(i, S.center_index(j));
        return power == 2 ? d * d : d;
    }
    const double d2 = squared_distance(P.point(i), S.center(j));
    return power == 2 ? d2 : std::sqrt(d2);
}

std::vector<std::vector<std::size_t>> members_of(const Clustering& cl) {
    std::vector<std::vector<std::size_t>> members(cl.k());
    for (std::size_t i = 0; i < cl.assignment.size(); ++i)
        members[cl.assignment[i]].push_back(i);
    return members;
}

double cluster_cost_at(const Dataset& P, std::span<const std::size_t> members,
                       std::span<const double> c) {
    CompensatedSum s;
    for (std::size_t i : members) s += pair_cost(P.metric(), P.point(i), c);
    return s.value();
}

/// Index (into members) of the best medoid; `current` competes when given.
std::size_t best_medoid(const Dataset& P, std::span<const std::size_t> members,
                        std::optional<std::size_t> current) {
    auto cost_of = [&](std::size_t c) {
        CompensatedSum s;
        for (std::size_t i : members)
            s += P.is_finite() ? P.entry(c, i) : pair_cost(P.metric(), P.point(c), P.point(i));
        return s.value();
    };
    std::size_t best = current.value_or(members.front());
    double best_cost = cost_of(best);
    for (std::size_t c : members) {
        const double v = cost_of(c);
        if (v < best_cost) {
            best_cost = v;
            best = c;
        }
    }
    return best;
}

/// One center-update step. Returns true when an empty cluster was re-seeded.
bool update_centers(const Dataset& P, Solution& S, const Clustering& cl, const SeedConfig& cfg) {
    const auto members = members_of(cl);
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < S.k(); ++j) {
        if (members[j].empty()) {
            empty.push_back(j);
            continue;
        }
        if (P.is_finite()) {
            S.set_center_index(j, best_medoid(P, members[j], S.center_index(j)));
        } else if (P.metric() == MetricKind::squared_euclidean) {
            const auto c = centroid(P, members[j]);
            std::copy(c.begin(), c.end(), S.center(j).begin());
        } else {
            const std::vector<double> old(S.center(j).begin(), S.center(j).end());
            const double old_cost = cluster_cost_at(P, members[j], old);
            std::vector<double> cand;
            if (cfg.medoid_updates) {
                auto p = P.point(best_medoid(P, members[j], std::nullopt));
                cand.assign(p.begin(), p.end());
            } else {
                cand = geometric_median(P, members[j], cfg.weiszfeld_max_iters,
                                        cfg.weiszfeld_rel_tol);
            }
            if (cluster_cost_at(P, members[j], cand) < old_cost)
                std::copy(cand.begin(), cand.end(), S.center(j).begin());
        }
    }
    if (empty.empty()) return false;
    // Farthest-point repair, using the costs to the pre-update centers.
    std::vector<double> cost = cl.point_costs;
    bool reseeded = false;
    for (std::size_t j : empty) {
        const auto it = std::max_element(cost.begin(), cost.end());
        if (*it <= 0.0) break;
        const auto far = static_cast<std::size_t>(it - cost.begin());
        S.set_to_point(P, j, far);
        cost[far] = 0.0;
        reseeded = true;
    }
    return reseeded;
}

Solution snap_to_centroids(const Dataset& P, Solution S, const Clustering& cl) {
    const auto members = members_of(cl);
    for (std::size_t j = 0; j < S.k(); ++j) {
        if (members[j].empty()) continue;
        const auto c = centroid(P, members[j]);
        std::copy(c.begin(), c.end(), S.center(j).begin());
    }
    return S;
}

ApproxSolution finish(const Dataset& P, Solution S) {
    ApproxSolution out;
    if (P.metric() == MetricKind::squared_euclidean) {
        // Run to an exact fixed point so every center is its cluster's centroid.
        Clustering cl = assign(P, S);
        for (int it = 0; it < 1000; ++it) {
            Solution next = snap_to_centroids(P, S, cl);
            Clustering next_cl = assign(P, next);
            const bool stable = next_cl.assignment == cl.assignment;
            S = std::move(next);
            cl = std::move(next_cl);
            if (stable) break;
        }
        S = snap_to_centroids(P, std::move(S), cl);
        out.clustering = clustering_from_labels(P, S, cl.assignment);
    } else {
        out.clustering = assign(P, S);
    }
    out.centers = std::move(S);
    out.delta.resize(out.centers.k());
    for (std::size_t j = 0; j < out.delta.size(); ++j)
        out.delta[j] = out.clustering.sizes[j] == 0
                           ? 0.0
                           : out.clustering.costs[j] / static_cast<double>(out.clustering.sizes[j]);
    return out;
}

}  // namespace

Solution d2_seed(const Dataset& P, std::size_t k, int power, std::uint64_t seed) {
    const std::size_t n = P.size();
    if (k == 0) throw ValidationError("k must be at least 1");
    if (k > n)
        throw ValidationError("cannot seed " + std::to_string(k) + " centers from " +
                              std::to_string(n) + " points");
    if (power != 1 && power != 2) throw ValidationError("seeding power must be 1 or 2");
    if (P.metric() == MetricKind::squared_euclidean && power != 2)
        throw ValidationError("k-means seeding uses power 2");
    if (P.metric() == MetricKind::euclidean && power != 1)
        throw ValidationError("k-median seeding uses power 1");

    Engine eng(seed);
    std::vector<std::size_t> chosen{uniform_index(eng, n)};
    std::vector<bool> taken(n, false);
    taken[chosen[0]] = true;
    Solution S = Solution::from_points(P, chosen);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = seeding_weight(P, i, S, 0, power);

    while (chosen.size() < k) {
        CompensatedSum mass;
        for (double w : weight) mass += w;
        std::size_t pick = npos;
        if (mass.value() > 0.0) {
            const double u = uniform01(eng) * mass.value();
            double run = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (weight[i] <= 0.0) continue;
                run += weight[i];
                pick = i;
                if (u < run) break;
            }
        } else {
            // Every point sits on a center: any remaining index is a duplicate.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i]) free.push_back(i);
            pick = free[uniform_index(eng, free.size())];
        }
        chosen.push_back(pick);
        taken[pick] = true;
        S = Solution::from_points(P, chosen);
        const std::size_t j = chosen.size() - 1;
        for (std::size_t i = 0; i < n; ++i)
            weight[i] = std::min(weight[i], seeding_weight(P, i, S, j, power));
    }
    return S;
}

LloydResult lloyd(const Dataset& P, Solution S0, const SeedConfig& cfg) {
    LloydResult r;
    r.centers = std::move(S0);
    r.clustering = assign(P, r.centers);
    r.history.push_back(r.clustering.total);
    for (int it = 0; it < cfg.lloyd_max_iters; ++it) {
        Solution next = r.centers;
        const bool reseeded = update_centers(P, next, r.clustering, cfg);
        Clustering next_cl = assign(P, next);
        const double before = r.clustering.total;
        const bool stable = !reseeded && next_cl.assignment == r.clustering.assignment;
        r.centers = std::move(next);
        r.clustering = std::move(next_cl);
        r.history.push_back(r.clustering.total);
        r.iterations = it + 1;
        if (stable) break;
        if (before <= 0.0 || (before - r.clustering.total) < cfg.lloyd_rel_tol * before) break;
    }
    return r;
}

Solution local_search(const Dataset& P, Solution S, int budget, std::uint64_t seed) {
    if (budget <= 0) return S;
    Engine eng(seed);
    double cost = total_cost(P, S);
    for (int attempt = 0; attempt < budget && cost > 0.0; ++attempt) {
        const std::size_t j = uniform_index(eng, S.k());
        const std::size_t i = uniform_index(eng, P.size());
        Solution cand = S;
        cand.set_to_point(P, j, i);
        const double c = total_cost(P, cand);
        if (c < cost * (1.0 - 1e-12)) {
            S = std::move(cand);
            cost = c;
        }
    }
    return S;
}

ApproxSolution approx_solution(const Dataset& P, std::size_t k, const SeedConfig& cfg) {
    if (k == 0 || k > P.size())
        throw ValidationError("k must lie in [1, n]; got k=" + std::to_string(k) +
                              ", n=" + std::to_string(P.size()));
    if (cfg.lloyd_max_iters < 0 || cfg.local_search_budget < 0 || cfg.restarts < 0 ||
        cfg.lloyd_rel_tol < 0.0)
        throw ValidationError("seed config counts and tolerance must be nonnegative");
    const int power = P.metric() == MetricKind::euclidean ? 1 : 2;
    const std::size_t runs = static_cast<std::size_t>(std::max(1, cfg.restarts));
    std::vector<ApproxSolution> results(runs);
    parallel_for(runs, [&](std::size_t r) {
        const std::uint64_t s = derive_seed(cfg.rng_seed, r);
        Solution S = d2_seed(P, k, power, derive_seed(s, 0));
        S = lloyd(P, std::move(S), cfg).centers;
        if (cfg.local_search_budget > 0) {
            S = local_search(P, std::move(S), cfg.local_search_budget, derive_seed(s, 1));
            S = lloyd(P, std::move(S), cfg).centers;
        }
        results[r] = finish(P, std::move(S));
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs; ++r)
        if (results[r].total() < results[best].total()) best = r;
    return std::move(results[best]);
}

ApproxSolution make_approx_solution(const Dataset& P, Solution centers) {
    ApproxSolution out;
    out.clustering = assign(P, centers);
    out.centers = std::move(centers);
    out.delta.resize(out.centers.k());
    for (std::size_t j = 0; j < out.delta.size(); ++j)
        out.delta[j] = out.clustering.sizes[j] == 0
                           ? 0.0
                           : out.clustering.costs[j] / static_cast<double>(out.clustering.sizes[j]);
    return out;
}

std::vector<double> geometric_median(const Dataset& P, std::span<const std::size_t> members,
                                     int max_iters, double rel_tol) {
    std::vector<double> x = centroid(P, members);
    const std::size_t d = P.dim();
    std::vector<double> num(d);
    for (int it = 0; it < max_iters; ++it) {
        std::fill(num.begin(), num.end(), 0.0);
        double den = 0.0;
        for (std::size_t i : members) {
            auto p = P.point(i);
            const double dist = std::sqrt(squared_distance(p, x));
            if (dist <= 1e-300) continue;
            const double w = 1.0 / dist;
            den += w;
            for (std::size_t c = 0; c < d; ++c) num[c] += w * p[c];
        }
        if (den == 0.0) break;
        double shift = 0.0, norm = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double nx = num[c] / den;
            shift += (nx - x[c]) * (nx - x[c]);
            norm += nx * nx;
            x[c] = nx;
        }
        if (std::sqrt(shift) <= rel_tol * std::max(1.0, std::sqrt(norm))) break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Exact optimum by set-partition enumeration

namespace {

class PartitionSearch {
public:
    PartitionSearch(const Dataset& P, std::size_t k) : P_(P), k_(k), n_(P.size()) {
        if (!P.is_finite()) {
            // Costs are translation invariant; centering keeps the moment
            // formula well conditioned.
            std::vector<std::size_t> all(n_);
            std::iota(all.begin(), all.end(), 0);
            const auto mean = centroid(P, all);
            local_ = P.coords();
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t c = 0; c < P.dim(); ++c) local_[i * P.dim() + c] -= mean[c];
        }
        labels_.assign(n_, 0);
        best_labels_.assign(n_, 0);
        blocks_.resize(k_);
        for (auto& b : blocks_) b.sum.assign(P.dim(), 0.0);
    }

    std::vector<std::size_t> run() {
        recurse(0, 0, 0.0);
        return best_labels_;
    }

private:
    struct Block {
        std::vector<std::size_t> members;
        std::vector<double> sum;
        double sumsq = 0.0;
        double cost = 0.0;
    };

    std::span<const double> pt(std::size_t i) const {
        return {local_.data() + i * P_.dim(), P_.dim()};
    }

    double block_cost(const Block& b) const {
        if (b.members.size() <= 1) return 0.0;
        switch (P_.metric()) {
        case MetricKind::squared_euclidean: {
            double s2 = 0.0;
            for (double v : b.sum) s2 += v * v;
            return std::max(0.0, b.sumsq - s2 / static_cast<double>(b.members.size()));
        }
        case MetricKind::finite_matrix: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : b.members) {
                double s = 0.0;
                for (std::size_t i : b.members) s += P_.entry(c, i);
                best = std::min(best, s);
            }
            return best;
        }
        case MetricKind::euclidean: {
            const auto med = geometric_median(P_, b.members);
            double s = cluster_cost_at(P_, b.members, med);
            // A member point is also a valid center; keep the better bound.
            for (std::size_t c : b.members) {
                double t = 0.0;
                for (std::size_t i : b.members) t += std::sqrt(squared_distance(P_.point(c), P_.point(i)));
                s = std::min(s, t);
            }
            return s;
        }
        }
        return 0.0;
    }

    void recurse(std::size_t i, std::size_t used, double partial) {
        if (partial >= best_) return;
        if (i == n_) {
            best_ = partial;
            best_labels_ = labels_;
            return;
        }
        const std::size_t limit = std::min(used + 1, k_);
        for (std::size_t b = 0; b < limit; ++b) {
            Block& blk = blocks_[b];
            const double old_cost = blk.cost;
            blk.members.push_back(i);
            if (!P_.is_finite()) {
                auto p = pt(i);
                for (std::size_t c = 0; c < p.size(); ++c) {
                    blk.sum[c] += p[c];
                    blk.sumsq += p[c] * p[c];
                }
            }
            blk.cost = block_cost(blk);
            labels_[i] = b;
            recurse(i + 1, std::max(used, b + 1), partial - old_cost + blk.cost);
            if (!P_.is_finite()) {
                auto p = pt(i);
                for (std::size_t c = 0; c < p.size(); ++c) {
                    blk.sum[c] -= p[c];
                    blk.sumsq -= p[c] * p[c];
                }
            }
            blk.members.pop_back();
            blk.cost = old_cost;
        }
    }

    const Dataset& P_;
    std::size_t k_;
    std::size_t n_;
    std::vector<double> local_;
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> best_labels_;
    std::vector<Block> blocks_;
    double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

ExactOptimum brute_force_opt(const Dataset& P, std::size_t k) {
    const std::size_t n = P.size();
    if (k == 0) throw ValidationError("k must be at least 1");
    if (n > kBruteForceMaxPoints)
        throw ValidationError("brute force limited to n <= 14, got n=" + std::to_string(n));

    std::vector<std::size_t> labels(n);
    if (k >= n) {
        std::iota(labels.begin(), labels.end(), 0);
    } else {
        labels = PartitionSearch(P, k).run();
    }

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);

    Solution S;
    if (P.is_finite()) {
        std::vector<std::size_t> ids(k, members[0].front());
        for (std::size_t j = 0; j < k; ++j)
            if (!members[j].empty()) ids[j] = best_medoid(P, members[j], std::nullopt);
        S = Solution::from_indices(std::move(ids));
    } else {
        std::vector<double> flat;
        std::vector<double> first;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<double> c;
            if (members[j].empty()) {
                c = first;
            } else if (P.metric() == MetricKind::squared_euclidean) {
                c = centroid(P, members[j]);
            } else {
                c = geometric_median(P, members[j]);
                const std::size_t m = best_medoid(P, members[j], std::nullopt);
                if (cluster_cost_at(P, members[j], P.point(m)) < cluster_cost_at(P, members[j], c))
                    c.assign(P.point(m).begin(), P.point(m).end());
            }
            if (j == 0) first = c;
            flat.insert(flat.end(), c.begin(), c.end());
        }
        S = Solution::from_coords(std::move(flat), P.dim());
    }

    ExactOptimum out;
    out.clustering = clustering_from_labels(P, S, labels);
    out.opt = out.clustering.total;
    out.centers = std::move(S);
    return out;
}

}  // namespace coreset_lab
