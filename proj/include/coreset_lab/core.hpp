#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coreset_lab {

/// Raised when inputs break a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a file cannot be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class MetricKind {
    squared_euclidean,  // k-means
    euclidean,          // k-median
    finite_matrix,
};

std::string_view to_string(MetricKind kind);
MetricKind metric_from_string(std::string_view name);

enum class Objective { kmeans, kmedian };

std::string_view to_string(Objective objective);
Objective objective_from_string(std::string_view name);
/// Finite metrics use their matrix entries as k-means costs.
inline Objective objective_for(MetricKind kind) {
    return kind == MetricKind::euclidean ? Objective::kmedian : Objective::kmeans;
}

/// floor(log2 x) and ceil(log2 x) for x > 0, exact at powers of two.
int floor_log2(double x);
int ceil_log2(double x);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// 64-bit FNV-1a over a canonical byte stream.
class Fnv1a {
public:
    void add_bytes(const void* data, std::size_t len);
    void add(std::uint64_t v) { add_bytes(&v, sizeof v); }
    void add(double v);
    void add(std::string_view s);
    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 1469598103934665603ULL;
};

std::string digest_hex(std::uint64_t digest);
std::uint64_t digest_from_hex(std::string_view hex);

/// Indexed point collection under one metric. Euclidean datasets keep
/// row-major coordinates; finite-matrix datasets keep an n x n cost matrix
/// and expose points only through their indices.
class Dataset {
public:
    Dataset() = default;

    static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                             MetricKind metric = MetricKind::squared_euclidean);
    static Dataset from_flat(std::vector<double> coords, std::size_t dim,
                             MetricKind metric = MetricKind::squared_euclidean);
    /// Symmetric (within 1e-9), zero-diagonal, nonnegative matrix.
    static Dataset from_matrix(std::vector<double> matrix, std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }
    MetricKind metric() const { return metric_; }
    bool is_finite() const { return metric_ == MetricKind::finite_matrix; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    double entry(std::size_t i, std::size_t j) const { return matrix_[i * n_ + j]; }

    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& matrix() const { return matrix_; }

    /// Same coordinates under another Euclidean metric.
    Dataset with_metric(MetricKind metric) const;

    std::uint64_t digest() const;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    MetricKind metric_ = MetricKind::squared_euclidean;
    std::vector<double> coords_;
    std::vector<double> matrix_;
};

/// k centers: coordinates in Euclidean modes, point indices in finite mode.
class Solution {
public:
    Solution() = default;

    static Solution from_coords(std::vector<double> flat, std::size_t dim);
    static Solution from_rows(const std::vector<std::vector<double>>& rows);
    static Solution from_indices(std::vector<std::size_t> ids);
    /// Centers located at the given input points of P.
    static Solution from_points(const Dataset& P, std::span<const std::size_t> ids);

    std::size_t k() const { return indexed_ ? ids_.size() : (dim_ == 0 ? 0 : coords_.size() / dim_); }
    std::size_t dim() const { return dim_; }
    bool indexed() const { return indexed_; }
    bool empty() const { return k() == 0; }

    std::span<const double> center(std::size_t j) const {
        return {coords_.data() + j * dim_, dim_};
    }
    std::span<double> center(std::size_t j) { return {coords_.data() + j * dim_, dim_}; }
    std::size_t center_index(std::size_t j) const { return ids_[j]; }
    void set_center_index(std::size_t j, std::size_t id) { ids_[j] = id; }

    /// Replaces center j by input point i of P.
    void set_to_point(const Dataset& P, std::size_t j, std::size_t i);

    const std::vector<double>& coords() const { return coords_; }
    const std::vector<std::size_t>& indices() const { return ids_; }

    bool operator==(const Solution&) const = default;

private:
    std::vector<double> coords_;
    std::vector<std::size_t> ids_;
    std::size_t dim_ = 0;
    bool indexed_ = false;
};

/// Weighted multiset of points. `sources` holds the input-point index of
/// each entry, or npos for non-input points.
struct WeightedSet {
    std::size_t dim = 0;
    std::vector<double> coords;
    std::vector<std::size_t> sources;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * dim, dim};
    }
    void push_back(std::span<const double> p, std::size_t source, double weight);
    double total_weight() const;
};

struct Clustering {
    std::vector<std::size_t> assignment;
    std::vector<double> point_costs;
    std::vector<std::size_t> sizes;
    std::vector<double> costs;
    double total = 0.0;

    std::size_t k() const { return sizes.size(); }
};

struct Nearest {
    std::size_t index = 0;
    double cost = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Cost between two coordinate vectors under a Euclidean metric.
double pair_cost(MetricKind metric, std::span<const double> a, std::span<const double> b);

/// Cost between input point i and center j, any mode.
double point_center_cost(const Dataset& P, std::size_t i, const Solution& S, std::size_t j);

/// Cost between center a of A and center b of S, any mode.
double center_center_cost(const Dataset& P, const Solution& A, std::size_t a, const Solution& S,
                          std::size_t b);

/// Lowest index wins exact ties.
Nearest nearest_center(std::span<const double> p, const Solution& S, MetricKind metric);
Nearest nearest_center(const Dataset& P, std::size_t i, const Solution& S);

double total_cost(const Dataset& P, const Solution& S);
/// Sum of w * cost(q, S). `space` is required in finite-matrix mode.
double total_cost(const WeightedSet& set, const Solution& S, MetricKind metric,
                  const Dataset* space = nullptr);

std::vector<double> centroid(const WeightedSet& set);
std::vector<double> centroid(const Dataset& P, std::span<const std::size_t> members);

Clustering assign(const Dataset& P, const Solution& S);
/// Clustering with a fixed labeling; costs are taken to the labeled center.
Clustering clustering_from_labels(const Dataset& P, const Solution& S,
                                  std::span<const std::size_t> labels);

struct IdentitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of sum ||x-p||^2 = n ||x-c||^2 + sum ||c-p||^2, c the centroid.
IdentitySides centroid_identity_check(const Dataset& P, std::span<const double> x);

struct TriangleViolation {
    std::size_t i, j, l;
    double excess;
};

/// Checks d(i,l) <= d(i,j) + d(j,l) + tol over all triples.
std::vector<TriangleViolation> triangle_violations(const Dataset& P, double tol = 1e-9,
                                                   std::size_t limit = 16);

}  // namespace coreset_lab
