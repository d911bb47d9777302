#include "coreset_lab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace coreset_lab {

StructureParams structure_params(const ApproxSolution& A, double eps, Objective objective) {
    if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps must lie in (0, 1/2]");
    StructureParams p;
    p.eps = eps;
    p.objective = objective;
    p.far_factor = objective == Objective::kmeans ? 1.0 / (eps * eps) : 1.0 / eps;
    const double k = static_cast<double>(A.k());
    p.T = eps * eps * eps * A.total() / k;
    p.b_max = floor_log2(k / (eps * eps * eps));
    p.t_max = ceil_log2(p.far_factor);
    p.l_max = floor_log2(1.0 / eps);
    return p;
}

int ring_index(double cost, double delta, int l_max) {
    if (!(cost >= 2.0 * delta) || delta <= 0.0) return 0;
    const double top = std::ldexp(delta, l_max + 1);
    if (cost >= top) return l_max + 1;
    int l = 1;
    while (l < l_max && cost >= std::ldexp(delta, l + 1)) ++l;
    return l;
}

bool interacts(double cost_aj_x, double delta_j, double cost_aj_S) {
    return cost_aj_x >= 32.0 * delta_j && cost_aj_x <= 16.0 * cost_aj_S;
}

std::vector<std::size_t> StructureReport::group(int band, int type) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < clusters.size(); ++j)
        if (clusters[j].band == band && clusters[j].type == type) out.push_back(j);
    return out;
}

std::pair<int, int> StructureReport::largest_group() const {
    std::map<std::pair<int, int>, std::size_t> counts;
    for (const auto& c : clusters)
        if (c.band >= 0 && c.type >= 0) counts[{c.band, c.type}] += 1;
    std::pair<int, int> best{-1, -1};
    std::size_t best_count = 0;
    for (const auto& [key, count] : counts)
        if (count > best_count) {
            best = key;
            best_count = count;
        }
    return best;
}

StructureReport classify_structure(const Dataset& P, const ApproxSolution& A, const Solution& S,
                                   double eps) {
    if (A.clustering.assignment.size() != P.size())
        throw ValidationError("reference solution was not computed over this dataset");
    StructureReport r;
    r.params = structure_params(A, eps, objective_for(P.metric()));
    const StructureParams& p = r.params;
    const std::size_t k = A.k();
    r.clusters.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        ClusterClass& c = r.clusters[j];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < S.k(); ++s)
            best = std::min(best, center_center_cost(P, A.centers, j, S, s));
        c.center_cost = best;
        const double delta = A.delta[j];
        const double threshold = delta * p.far_factor;
        c.far = p.objective == Objective::kmeans ? best > threshold : best >= threshold;
        if (c.far) continue;

        const double cluster_cost = A.clustering.costs[j];
        if (cluster_cost < p.T) {
            c.low_cost = true;
        } else if (p.T > 0.0) {
            int b = 0;
            while (b < p.b_max && cluster_cost >= std::ldexp(p.T, b + 1)) ++b;
            c.band = b;
        } else {
            c.band = 0;
        }

        if (best < delta || best == 0.0) {
            c.type = 0;
        } else {
            int t = 1;
            while (t < p.t_max && best >= std::ldexp(delta, t)) ++t;
            c.type = t;
        }
    }
    r.ring.resize(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        const std::size_t j = A.clustering.assignment[i];
        r.ring[i] = ring_index(point_center_cost(P, i, A.centers, j), A.delta[j], p.l_max);
    }
    return r;
}

InteractionReport interaction_profile(const Dataset& P, const ApproxSolution& A, const Solution& S,
                                      const StructureReport& structure, int band, int type) {
    InteractionReport r;
    r.band = band;
    r.type = type;
    const auto group = structure.group(band, type);
    r.group_size = group.size();
    r.sets.resize(S.k());
    for (std::size_t x = 0; x < S.k(); ++x) {
        for (std::size_t j : group) {
            const double to_x = center_center_cost(P, A.centers, j, S, x);
            if (interacts(to_x, A.delta[j], structure.clusters[j].center_cost))
                r.sets[x].push_back(j);
        }
        r.signature.push_back(r.sets[x].size());
        r.N += r.sets[x].size();
    }
    r.class_r = r.N == 0 ? -1 : floor_log2(static_cast<double>(r.N));
    return r;
}

namespace {

struct Located {
    std::size_t cluster;
    double cost;  // cost(q, A)
};

class EntryLocator {
public:
    EntryLocator(const Dataset& P, const ApproxSolution& A, const Coreset& omega)
        : P_(P), A_(A), omega_(omega) {
        if (A.clustering.assignment.size() != P.size())
            throw ValidationError("reference solution was not computed over this dataset");
        if (omega.approx_digest != 0 && omega.approx_digest != A.digest())
            throw ValidationError("coreset was built from a different reference solution");
        if (omega.metric != P.metric())
            throw ValidationError("coreset metric does not match dataset");
        trusted_sources_ = omega.dataset_digest == 0 || omega.dataset_digest == P.digest();
    }

    Located operator()(std::size_t e) const {
        const std::size_t src = omega_.entries.sources[e];
        if (trusted_sources_ && src < P_.size())
            return {A_.clustering.assignment[src], A_.clustering.point_costs[src]};
        if (P_.is_finite())
            throw ValidationError("finite-matrix coreset entry without a point index");
        const Nearest nc = nearest_center(omega_.entries.point(e), A_.centers, P_.metric());
        return {nc.index, nc.cost};
    }

private:
    const Dataset& P_;
    const ApproxSolution& A_;
    const Coreset& omega_;
    bool trusted_sources_ = true;
};

}  // namespace

EventEReport check_event_e(const Dataset& P, const ApproxSolution& A, const Coreset& omega,
                           double eps) {
    const StructureParams params = structure_params(A, eps, objective_for(P.metric()));
    const EntryLocator locate(P, A, omega);
    const std::size_t k = A.k();
    const int rings = params.l_max + 2;

    std::vector<CompensatedSum> weight(k), cost(k);
    std::vector<std::vector<CompensatedSum>> ring_mass(k, std::vector<CompensatedSum>(rings));
    for (std::size_t e = 0; e < omega.size(); ++e) {
        const Located loc = locate(e);
        const double w = omega.entries.weights[e];
        weight[loc.cluster] += w;
        cost[loc.cluster] += w * loc.cost;
        ring_mass[loc.cluster][ring_index(loc.cost, A.delta[loc.cluster], params.l_max)] += w;
    }

    EventEReport r;
    r.eps = eps;
    for (std::size_t j = 0; j < k; ++j) {
        const double size = static_cast<double>(A.clustering.sizes[j]);
        const double W = weight[j].value();
        const double dev = std::abs(W - size);
        EventEReport::SizeCheck s{j, W, size, size > 0.0 ? dev / size : (dev > 0.0 ? 1.0 : 0.0),
                                  eps * size - dev, dev <= eps * size};
        r.p1.push_back(s);
        r.p1_pass = r.p1_pass && s.pass;

        for (int l = 0; l < rings; ++l) {
            const double mass = ring_mass[j][l].value();
            const double bound = size / std::ldexp(1.0, l - 1);
            EventEReport::RingCheck rc{j, l, mass, bound, bound - mass, l >= 1, mass <= bound};
            r.p2.push_back(rc);
            if (rc.checked) r.p2_pass = r.p2_pass && rc.pass;
        }

        const double true_cost = A.clustering.costs[j];
        const double est = cost[j].value();
        const double cdev = std::abs(est - true_cost);
        EventEReport::CostCheck c{j,
                                  est,
                                  true_cost,
                                  true_cost > 0.0 ? cdev / true_cost : (cdev > 0.0 ? 1.0 : 0.0),
                                  eps * true_cost - cdev,
                                  cdev <= eps * true_cost};
        r.p3.push_back(c);
        r.p3_pass = r.p3_pass && c.pass;
    }
    r.pass = r.p1_pass && r.p2_pass && r.p3_pass;
    return r;
}

std::vector<WeightBoundViolation> check_weight_bounds(const Dataset& P, const ApproxSolution& A,
                                                      const Coreset& omega) {
    std::vector<WeightBoundViolation> out;
    if (omega.m == 0) return out;
    const EntryLocator locate(P, A, omega);
    const Clustering& cl = A.clustering;
    const double k = static_cast<double>(
        std::count_if(cl.sizes.begin(), cl.sizes.end(), [](std::size_t s) { return s > 0; }));
    const double m = static_cast<double>(omega.m);
    const double total = A.total();
    for (std::size_t e = 0; e < omega.size(); ++e) {
        const Located loc = locate(e);
        const double size = static_cast<double>(cl.sizes[loc.cluster]);
        const double cluster_cost = cl.costs[loc.cluster];
        const double delta = size > 0.0 ? cluster_cost / size : 0.0;
        double terms[4] = {k * size / m, HUGE_VAL, HUGE_VAL, HUGE_VAL};
        if (loc.cost > 0.0) {
            terms[1] = k * cluster_cost / (m * loc.cost);
            terms[2] = total / (m * loc.cost);
        }
        if (delta > 0.0) terms[3] = total / (m * delta);
        const int binding = static_cast<int>(std::min_element(terms, terms + 4) - terms);
        const double bound = 4.0 * terms[binding];
        const double w = omega.entries.weights[e];
        if (w > bound * (1.0 + 1e-12)) out.push_back({e, w, bound, binding});
    }
    return out;
}

std::vector<SeparationViolation> check_separation(const Dataset& P, const Clustering& clustering,
                                                  double beta, double opt_k) {
    if (!(opt_k > 0.0)) throw ValidationError("separation check needs OPT_k > 0");
    if (P.metric() != MetricKind::squared_euclidean)
        throw ValidationError("separation check is defined for the k-means objective");
    if (clustering.assignment.size() != P.size())
        throw ValidationError("clustering was not computed over this dataset");
    const std::size_t k = clustering.k();
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < P.size(); ++i) members[clustering.assignment[i]].push_back(i);
    std::vector<std::vector<double>> centers(k);
    for (std::size_t j = 0; j < k; ++j)
        if (!members[j].empty()) centers[j] = centroid(P, members[j]);

    std::vector<SeparationViolation> out;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            if (members[i].empty() || members[j].empty()) continue;
            const double smaller =
                static_cast<double>(std::min(members[i].size(), members[j].size()));
            const double bound = beta * opt_k / (2.0 * smaller);
            const double c = squared_distance(centers[i], centers[j]);
            if (c < bound * (1.0 - 1e-9)) out.push_back({i, j, c, bound, c - bound});
        }
    return out;
}

StabilityProbe stability_probe(double cost_S, double opt_k, std::size_t N, std::size_t k,
                               double beta) {
    if (!(opt_k > 0.0)) throw ValidationError("stability probe needs OPT_k > 0");
    StabilityProbe p;
    p.cost_ratio = cost_S / opt_k;
    const double floor =
        (static_cast<double>(N) / static_cast<double>(k) - 1.0) * beta / 768.0;
    p.predicted_floor = std::max(1.0, floor);
    return p;
}

}  // namespace coreset_lab
