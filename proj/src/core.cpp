#include "coreset_lab/core.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>

namespace coreset_lab {

std::string_view to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::squared_euclidean: return "squared_euclidean";
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::finite_matrix: return "finite_matrix";
    }
    return "unknown";
}

MetricKind metric_from_string(std::string_view name) {
    if (name == "squared_euclidean") return MetricKind::squared_euclidean;
    if (name == "euclidean") return MetricKind::euclidean;
    if (name == "finite_matrix") return MetricKind::finite_matrix;
    throw ValidationError("unknown metric kind '" + std::string(name) + "'");
}

std::string_view to_string(Objective objective) {
    return objective == Objective::kmeans ? "kmeans" : "kmedian";
}

Objective objective_from_string(std::string_view name) {
    if (name == "kmeans") return Objective::kmeans;
    if (name == "kmedian") return Objective::kmedian;
    throw ValidationError("unknown objective '" + std::string(name) + "'");
}

int floor_log2(double x) {
    if (!(x > 0.0)) throw ValidationError("log2 of a nonpositive value");
    int e = 0;
    std::frexp(x, &e);
    return e - 1;
}

int ceil_log2(double x) {
    if (!(x > 0.0)) throw ValidationError("log2 of a nonpositive value");
    int e = 0;
    const double f = std::frexp(x, &e);
    return f == 0.5 ? e - 1 : e;
}

void Fnv1a::add_bytes(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        state_ ^= bytes[i];
        state_ *= 1099511628211ULL;
    }
}

void Fnv1a::add(double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    add(bits);
}

void Fnv1a::add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    add_bytes(s.data(), s.size());
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::uint64_t digest_from_hex(std::string_view hex) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
    if (ec != std::errc() || ptr != hex.data() + hex.size())
        throw ValidationError("malformed digest '" + std::string(hex) + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, MetricKind metric) {
    if (rows.empty()) throw ValidationError("dataset needs at least one point");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim)
            throw ValidationError("row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " coordinates, expected " +
                                  std::to_string(dim));
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return from_flat(std::move(flat), dim, metric);
}

Dataset Dataset::from_flat(std::vector<double> coords, std::size_t dim, MetricKind metric) {
    if (metric == MetricKind::finite_matrix)
        throw ValidationError("use from_matrix for finite metrics");
    if (dim == 0) throw ValidationError("Euclidean dataset needs dim >= 1");
    if (coords.empty() || coords.size() % dim != 0)
        throw ValidationError("coordinate count is not a positive multiple of dim");
    for (double c : coords)
        if (!std::isfinite(c)) throw ValidationError("non-finite coordinate");
    Dataset d;
    d.n_ = coords.size() / dim;
    d.dim_ = dim;
    d.metric_ = metric;
    d.coords_ = std::move(coords);
    return d;
}

Dataset Dataset::from_matrix(std::vector<double> matrix, std::size_t n) {
    if (n == 0) throw ValidationError("finite metric needs at least one point");
    if (matrix.size() != n * n) throw ValidationError("distance matrix is not n x n");
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i * n + i] != 0.0)
            throw ValidationError("nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            const double a = matrix[i * n + j];
            if (!std::isfinite(a)) throw ValidationError("non-finite matrix entry");
            if (a < 0.0)
                throw ValidationError("negative entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            if (std::abs(a - matrix[j * n + i]) > 1e-9)
                throw ValidationError("asymmetric entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
    }
    Dataset d;
    d.n_ = n;
    d.dim_ = 0;
    d.metric_ = MetricKind::finite_matrix;
    d.matrix_ = std::move(matrix);
    return d;
}

Dataset Dataset::with_metric(MetricKind metric) const {
    if (is_finite() || metric == MetricKind::finite_matrix)
        throw ValidationError("cannot switch between finite and Euclidean metrics");
    Dataset d = *this;
    d.metric_ = metric;
    return d;
}

std::uint64_t Dataset::digest() const {
    Fnv1a h;
    h.add(to_string(metric_));
    h.add(static_cast<std::uint64_t>(n_));
    h.add(static_cast<std::uint64_t>(dim_));
    for (double c : coords_) h.add(c);
    for (double c : matrix_) h.add(c);
    return h.value();
}

// ---------------------------------------------------------------------------
// Solution

Solution Solution::from_coords(std::vector<double> flat, std::size_t dim) {
    if (dim == 0 || flat.size() % dim != 0)
        throw ValidationError("center coordinates are not a multiple of dim");
    for (double c : flat)
        if (!std::isfinite(c)) throw ValidationError("non-finite center coordinate");
    Solution s;
    s.coords_ = std::move(flat);
    s.dim_ = dim;
    return s;
}

Solution Solution::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("solution needs at least one center");
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw ValidationError("ragged center rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return from_coords(std::move(flat), rows.front().size());
}

Solution Solution::from_indices(std::vector<std::size_t> ids) {
    Solution s;
    s.ids_ = std::move(ids);
    s.indexed_ = true;
    return s;
}

Solution Solution::from_points(const Dataset& P, std::span<const std::size_t> ids) {
    for (std::size_t id : ids)
        if (id >= P.size()) throw ValidationError("center index out of range");
    if (P.is_finite()) return from_indices({ids.begin(), ids.end()});
    std::vector<double> flat;
    flat.reserve(ids.size() * P.dim());
    for (std::size_t id : ids) {
        auto p = P.point(id);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return from_coords(std::move(flat), P.dim());
}

void Solution::set_to_point(const Dataset& P, std::size_t j, std::size_t i) {
    if (indexed_) {
        ids_[j] = i;
    } else {
        auto p = P.point(i);
        std::copy(p.begin(), p.end(), center(j).begin());
    }
}

// ---------------------------------------------------------------------------
// WeightedSet

void WeightedSet::push_back(std::span<const double> p, std::size_t source, double weight) {
    coords.insert(coords.end(), p.begin(), p.end());
    sources.push_back(source);
    weights.push_back(weight);
}

double WeightedSet::total_weight() const {
    CompensatedSum s;
    for (double w : weights) s += w;
    return s.value();
}

// ---------------------------------------------------------------------------
// Costs

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double pair_cost(MetricKind metric, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ValidationError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    switch (metric) {
    case MetricKind::squared_euclidean: return squared_distance(a, b);
    case MetricKind::euclidean: return std::sqrt(squared_distance(a, b));
    case MetricKind::finite_matrix: break;
    }
    throw ValidationError("coordinate cost requested in finite-matrix mode");
}

namespace {

void check_compatible(const Dataset& P, const Solution& S) {
    if (S.empty()) throw ValidationError("empty solution");
    if (P.is_finite() != S.indexed())
        throw ValidationError("solution kind does not match dataset metric");
    if (P.is_finite()) {
        for (std::size_t id : S.indices())
            if (id >= P.size()) throw ValidationError("center index out of range");
    } else if (S.dim() != P.dim()) {
        throw ValidationError("dimension mismatch: dataset " + std::to_string(P.dim()) +
                              ", solution " + std::to_string(S.dim()));
    }
}

}  // namespace

double point_center_cost(const Dataset& P, std::size_t i, const Solution& S, std::size_t j) {
    if (P.is_finite()) return P.entry(i, S.center_index(j));
    return pair_cost(P.metric(), P.point(i), S.center(j));
}

double center_center_cost(const Dataset& P, const Solution& A, std::size_t a, const Solution& S,
                          std::size_t b) {
    if (P.is_finite()) return P.entry(A.center_index(a), S.center_index(b));
    return pair_cost(P.metric(), A.center(a), S.center(b));
}

Nearest nearest_center(std::span<const double> p, const Solution& S, MetricKind metric) {
    if (S.empty()) throw ValidationError("empty solution");
    if (S.indexed()) throw ValidationError("indexed solution needs a finite dataset");
    if (p.size() != S.dim())
        throw ValidationError("dimension mismatch: point " + std::to_string(p.size()) +
                              ", solution " + std::to_string(S.dim()));
    Nearest best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < S.k(); ++j) {
        const double d = squared_distance(p, S.center(j));
        if (d < best.cost) best = {j, d};
    }
    if (metric == MetricKind::euclidean) best.cost = std::sqrt(best.cost);
    return best;
}

Nearest nearest_center(const Dataset& P, std::size_t i, const Solution& S) {
    if (!P.is_finite()) return nearest_center(P.point(i), S, P.metric());
    if (S.empty()) throw ValidationError("empty solution");
    Nearest best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < S.k(); ++j) {
        const double d = P.entry(i, S.center_index(j));
        if (d < best.cost) best = {j, d};
    }
    return best;
}

double total_cost(const Dataset& P, const Solution& S) {
    check_compatible(P, S);
    CompensatedSum s;
    for (std::size_t i = 0; i < P.size(); ++i) s += nearest_center(P, i, S).cost;
    return s.value();
}

double total_cost(const WeightedSet& set, const Solution& S, MetricKind metric,
                  const Dataset* space) {
    if (set.size() == 0) return 0.0;
    if (S.empty()) throw ValidationError("empty solution");
    CompensatedSum s;
    if (metric == MetricKind::finite_matrix) {
        if (space == nullptr || !space->is_finite())
            throw ValidationError("finite-matrix weighted set needs its distance matrix");
        check_compatible(*space, S);
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (set.sources[i] >= space->size())
                throw ValidationError("finite-matrix entry without a valid point index");
            s += set.weights[i] * nearest_center(*space, set.sources[i], S).cost;
        }
    } else {
        for (std::size_t i = 0; i < set.size(); ++i)
            s += set.weights[i] * nearest_center(set.point(i), S, metric).cost;
    }
    return s.value();
}

std::vector<double> centroid(const WeightedSet& set) {
    if (set.dim == 0) throw ValidationError("centroid needs coordinates (finite-matrix mode has none)");
    std::vector<CompensatedSum> acc(set.dim);
    CompensatedSum total;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double w = set.weights[i];
        total += w;
        auto p = set.point(i);
        for (std::size_t c = 0; c < set.dim; ++c) acc[c] += w * p[c];
    }
    const double W = total.value();
    if (!(W > 0.0)) throw ValidationError("centroid of zero total weight");
    std::vector<double> out(set.dim);
    for (std::size_t c = 0; c < set.dim; ++c) out[c] = acc[c].value() / W;
    return out;
}

std::vector<double> centroid(const Dataset& P, std::span<const std::size_t> members) {
    if (P.is_finite()) throw ValidationError("centroid does not exist in finite-matrix mode");
    if (members.empty()) throw ValidationError("centroid of zero total weight");
    std::vector<CompensatedSum> acc(P.dim());
    for (std::size_t i : members) {
        auto p = P.point(i);
        for (std::size_t c = 0; c < P.dim(); ++c) acc[c] += p[c];
    }
    std::vector<double> out(P.dim());
    for (std::size_t c = 0; c < P.dim(); ++c)
        out[c] = acc[c].value() / static_cast<double>(members.size());
    return out;
}

namespace {

Clustering finish_clustering(std::vector<std::size_t> labels, std::vector<double> costs_per_point,
                             std::size_t k) {
    Clustering c;
    c.sizes.assign(k, 0);
    std::vector<CompensatedSum> acc(k);
    CompensatedSum total;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        c.sizes[labels[i]] += 1;
        acc[labels[i]] += costs_per_point[i];
        total += costs_per_point[i];
    }
    c.costs.resize(k);
    for (std::size_t j = 0; j < k; ++j) c.costs[j] = acc[j].value();
    c.total = total.value();
    c.assignment = std::move(labels);
    c.point_costs = std::move(costs_per_point);
    return c;
}

}  // namespace

Clustering assign(const Dataset& P, const Solution& S) {
    check_compatible(P, S);
    std::vector<std::size_t> labels(P.size());
    std::vector<double> costs(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        const Nearest nc = nearest_center(P, i, S);
        labels[i] = nc.index;
        costs[i] = nc.cost;
    }
    return finish_clustering(std::move(labels), std::move(costs), S.k());
}

Clustering clustering_from_labels(const Dataset& P, const Solution& S,
                                  std::span<const std::size_t> labels) {
    check_compatible(P, S);
    if (labels.size() != P.size()) throw ValidationError("label count does not match dataset");
    std::vector<double> costs(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (labels[i] >= S.k()) throw ValidationError("label out of range");
        costs[i] = point_center_cost(P, i, S, labels[i]);
    }
    return finish_clustering({labels.begin(), labels.end()}, std::move(costs), S.k());
}

IdentitySides centroid_identity_check(const Dataset& P, std::span<const double> x) {
    if (P.is_finite()) throw ValidationError("centroid identity needs Euclidean coordinates");
    if (x.size() != P.dim()) throw ValidationError("dimension mismatch");
    std::vector<std::size_t> all(P.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto c = centroid(P, all);
    CompensatedSum lhs, spread;
    for (std::size_t i = 0; i < P.size(); ++i) {
        lhs += squared_distance(x, P.point(i));
        spread += squared_distance(c, P.point(i));
    }
    const double rhs = static_cast<double>(P.size()) * squared_distance(x, c) + spread.value();
    return {lhs.value(), rhs};
}

std::vector<TriangleViolation> triangle_violations(const Dataset& P, double tol,
                                                   std::size_t limit) {
    std::vector<TriangleViolation> out;
    const std::size_t n = P.size();
    auto d = [&](std::size_t a, std::size_t b) {
        return P.is_finite() ? P.entry(a, b) : pair_cost(P.metric(), P.point(a), P.point(b));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                const double excess = d(i, l) - d(i, j) - d(j, l);
                if (excess > tol) {
                    out.push_back({i, j, l, excess});
                    if (out.size() >= limit) return out;
                }
            }
    return out;
}

}  // namespace coreset_lab
