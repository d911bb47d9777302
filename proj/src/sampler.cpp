#include "coreset_lab/sampler.hpp"

#include <algorithm>
#include <map>

#include "coreset_lab/random.hpp"

namespace coreset_lab {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::sensitivity: return "sensitivity";
    case Algorithm::uniform: return "uniform";
    case Algorithm::offset: return "offset";
    }
    return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "sensitivity") return Algorithm::sensitivity;
    if (name == "uniform") return Algorithm::uniform;
    if (name == "offset") return Algorithm::offset;
    throw ValidationError("unknown algorithm '" + std::string(name) + "'");
}

namespace {

void check_solution_matches(const Dataset& P, const ApproxSolution& A) {
    const Clustering& cl = A.clustering;
    if (cl.assignment.size() != P.size() || cl.point_costs.size() != P.size())
        throw ValidationError("reference solution was not computed over this dataset");
    if (cl.k() != A.centers.k() || A.delta.size() != A.centers.k())
        throw ValidationError("reference solution has inconsistent cluster counts");
}

}  // namespace

SamplingDistribution compute_mu(const Dataset& P, const ApproxSolution& A) {
    check_solution_matches(P, A);
    const Clustering& cl = A.clustering;
    const std::size_t n = P.size();

    SamplingDistribution d;
    d.effective_k = static_cast<std::size_t>(
        std::count_if(cl.sizes.begin(), cl.sizes.end(), [](std::size_t s) { return s > 0; }));
    d.degenerate_clusters.resize(cl.k());
    for (std::size_t j = 0; j < cl.k(); ++j)
        d.degenerate_clusters[j] = cl.sizes[j] > 0 && !(cl.costs[j] > 0.0);
    const double total = cl.total;
    d.degenerate_total = !(total > 0.0);

    const double k4 = 4.0 * static_cast<double>(d.effective_k);
    const double uniform_global = 1.0 / (4.0 * static_cast<double>(n));
    d.mu.resize(n);
    d.terms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = cl.assignment[i];
        const double size = static_cast<double>(cl.sizes[j]);
        const double pc = cl.point_costs[i];
        std::array<double, 4> t{};
        t[0] = 1.0 / (k4 * size);
        t[1] = d.degenerate_clusters[j] ? t[0] : pc / (k4 * cl.costs[j]);
        if (d.degenerate_total) {
            t[2] = uniform_global;
            t[3] = uniform_global;
        } else {
            t[2] = pc / (4.0 * total);
            t[3] = (cl.costs[j] / size) / (4.0 * total);
        }
        d.terms[i] = t;
        d.mu[i] = t[0] + t[1] + t[2] + t[3];
    }
    return d;
}

std::size_t Coreset::distinct_points() const { return compact(*this).size(); }

SensitivitySampler::SensitivitySampler(const Dataset& P, const ApproxSolution& A)
    : P_(P), dist_(compute_mu(P, A)), approx_digest_(A.digest()), dataset_digest_(P.digest()) {
    cumulative_.resize(dist_.mu.size());
    double run = 0.0;
    for (std::size_t i = 0; i < dist_.mu.size(); ++i) {
        run += dist_.mu[i];
        cumulative_[i] = run;
    }
    if (!(run > 0.0)) throw ValidationError("degenerate sampling distribution");
}

Coreset SensitivitySampler::draw(std::size_t m, std::uint64_t seed) const {
    if (m == 0) throw ValidationError("coreset size m must be at least 1");
    Coreset c;
    c.metric = P_.metric();
    c.entries.dim = P_.dim();
    c.entries.coords.reserve(m * P_.dim());
    c.entries.sources.reserve(m);
    c.entries.weights.reserve(m);
    c.m = m;
    c.algorithm = "sensitivity";
    c.seed = seed;
    c.approx_digest = approx_digest_;
    c.dataset_digest = dataset_digest_;

    const double total = cumulative_.back();
    const double md = static_cast<double>(m);
    for (std::size_t block = 0; block * kBlock < m; ++block) {
        Engine eng(derive_seed(seed, block));
        const std::size_t end = std::min(m, (block + 1) * kBlock);
        for (std::size_t draw = block * kBlock; draw < end; ++draw) {
            const double u = uniform01(eng) * total;
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            std::size_t q = static_cast<std::size_t>(it - cumulative_.begin());
            if (q >= cumulative_.size()) q = cumulative_.size() - 1;
            c.entries.push_back(P_.point(q), q, 1.0 / (md * dist_.mu[q]));
        }
    }
    return c;
}

Coreset sensitivity_sample(const Dataset& P, const ApproxSolution& A, std::size_t m,
                           std::uint64_t seed) {
    return SensitivitySampler(P, A).draw(m, seed);
}

Coreset uniform_sample(const Dataset& P, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw ValidationError("coreset size m must be at least 1");
    Coreset c;
    c.metric = P.metric();
    c.entries.dim = P.dim();
    c.m = m;
    c.algorithm = "uniform";
    c.seed = seed;
    c.dataset_digest = P.digest();
    const double w = static_cast<double>(P.size()) / static_cast<double>(m);
    for (std::size_t block = 0; block * SensitivitySampler::kBlock < m; ++block) {
        Engine eng(derive_seed(seed, block));
        const std::size_t end = std::min(m, (block + 1) * SensitivitySampler::kBlock);
        for (std::size_t draw = block * SensitivitySampler::kBlock; draw < end; ++draw) {
            const std::size_t q = uniform_index(eng, P.size());
            c.entries.push_back(P.point(q), q, w);
        }
    }
    return c;
}

Coreset offset_coreset(const Dataset& P, const ApproxSolution& A) {
    if (P.metric() != MetricKind::squared_euclidean)
        throw ValidationError("offset coreset needs the k-means objective on coordinates");
    check_solution_matches(P, A);
    const Clustering& cl = A.clustering;
    std::vector<std::vector<std::size_t>> members(cl.k());
    for (std::size_t i = 0; i < P.size(); ++i) members[cl.assignment[i]].push_back(i);

    Coreset c;
    c.metric = P.metric();
    c.entries.dim = P.dim();
    c.algorithm = "offset";
    c.approx_digest = A.digest();
    c.dataset_digest = P.digest();
    for (std::size_t j = 0; j < cl.k(); ++j) {
        if (members[j].empty()) continue;
        const auto mean = centroid(P, members[j]);
        auto center = A.centers.center(j);
        double norm2 = 0.0;
        for (double v : mean) norm2 += v * v;
        const double scale = std::max(1.0, std::sqrt(norm2));
        if (std::sqrt(squared_distance(mean, center)) > 1e-9 * scale)
            throw ValidationError("center " + std::to_string(j) +
                                  " is not the centroid of its cluster");
        c.entries.push_back(center, npos, static_cast<double>(members[j].size()));
    }
    c.offset = A.total();
    c.m = c.entries.size();
    return c;
}

namespace {

bool is_identity(const Coreset& c) { return c.size() == 0 && c.offset == 0.0; }

}  // namespace

Coreset merge(const Coreset& a, const Coreset& b) {
    if (is_identity(b)) return a;
    if (is_identity(a)) return b;
    if (a.metric != b.metric) throw ValidationError("cannot merge coresets of different metrics");
    if (a.entries.dim != b.entries.dim)
        throw ValidationError("cannot merge coresets of different dimensions");
    if ((a.algorithm == "offset") != (b.algorithm == "offset"))
        throw ValidationError("cannot merge an offset coreset with a plain one");
    Coreset out = a;
    out.entries.coords.insert(out.entries.coords.end(), b.entries.coords.begin(),
                              b.entries.coords.end());
    out.entries.sources.insert(out.entries.sources.end(), b.entries.sources.begin(),
                               b.entries.sources.end());
    out.entries.weights.insert(out.entries.weights.end(), b.entries.weights.begin(),
                               b.entries.weights.end());
    out.offset = a.offset + b.offset;
    out.m = a.m + b.m;
    if (a.algorithm != b.algorithm) out.algorithm = "merged";
    if (a.approx_digest != b.approx_digest) out.approx_digest = 0;
    if (a.dataset_digest != b.dataset_digest) out.dataset_digest = 0;
    return out;
}

Coreset compact(const Coreset& c) {
    Coreset out = c;
    out.entries.coords.clear();
    out.entries.sources.clear();
    out.entries.weights.clear();
    std::map<std::vector<double>, std::size_t> seen_coords;
    std::map<std::size_t, std::size_t> seen_ids;
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::size_t* slot = nullptr;
        if (c.metric == MetricKind::finite_matrix) {
            auto [it, fresh] = seen_ids.try_emplace(c.entries.sources[i], out.size());
            if (!fresh) slot = &it->second;
        } else {
            auto p = c.entries.point(i);
            auto [it, fresh] = seen_coords.try_emplace(std::vector<double>(p.begin(), p.end()),
                                                       out.size());
            if (!fresh) slot = &it->second;
        }
        if (slot)
            out.entries.weights[*slot] += c.entries.weights[i];
        else
            out.entries.push_back(c.entries.point(i), c.entries.sources[i], c.entries.weights[i]);
    }
    return out;
}

}  // namespace coreset_lab
