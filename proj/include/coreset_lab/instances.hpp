#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coreset_lab/core.hpp"

namespace coreset_lab {

enum class InstanceKind { stable, simplex_lb, blobs, finite };

std::string_view to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(std::string_view name);

/// Generator parameters echoed alongside a dataset.
struct InstanceTag {
    InstanceKind kind = InstanceKind::blobs;
    std::size_t k = 0;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> cluster_sizes;  // points are stored cluster by cluster

    // stable
    double target_beta = 0.0;
    double noise_radius = 0.0;
    double center_sq_distance = 0.0;  // minimum pairwise squared distance of ball centers
    std::optional<double> certified_beta;  // +inf when OPT_k = 0 < OPT_{k-1}
    std::string beta_certificate;          // "exact" or "lower_bound"

    // simplex_lb: block i holds points [i*block_size, (i+1)*block_size), the
    // standard basis translated by i*separation along the first axis.
    double eps = 0.0;
    double separation = 0.0;
    std::size_t block_size = 0;

    // blobs
    double sigma = 0.0;
    double spread = 0.0;

    std::size_t block_of(std::size_t point) const;
    std::vector<double> block_translation(std::size_t block) const;

    bool operator==(const InstanceTag&) const = default;
};

using Instance = std::pair<Dataset, InstanceTag>;

/// Balls of radius noise_radius around centers at pairwise squared distance
/// D = 4 * target_beta * (sum_i |C_i| r^2) / min_i |C_i|. Centers sit on a
/// scaled simplex when dim >= k, otherwise on a line with spacing sqrt(D).
/// Instances of at most 12 points get an exact beta; larger ones get the
/// lower bound min_i |C_i| (sqrt(D)/2 - r)^2 / cost(P, centroids) - 1.
Instance gen_separated(const std::vector<std::size_t>& cluster_sizes, std::size_t dim,
                       double target_beta, double noise_radius, std::uint64_t seed);
Instance gen_separated(std::size_t k, std::size_t n_per, std::size_t dim, double target_beta,
                       double noise_radius, std::uint64_t seed);

inline constexpr double kDefaultSimplexSeparation = 1e6;

/// k translated copies of the standard basis of R^n, n = ceil(eps^-2).
Instance gen_simplex_lb(std::size_t k, double eps, double separation = kDefaultSimplexSeparation);

/// k Gaussian blobs with centers uniform in [0, spread]^dim.
Instance gen_blobs(std::size_t k, std::size_t n_per, std::size_t dim, double sigma, double spread,
                   std::uint64_t seed);
Instance gen_blobs(const std::vector<std::size_t>& cluster_sizes, std::size_t dim, double sigma,
                   double spread, std::uint64_t seed);

/// Finite metric from a square matrix; optionally audits the triangle inequality.
Dataset load_finite_metric(const std::vector<std::vector<double>>& matrix,
                           bool validate_triangle = false);

/// Simplex size for a given eps: ceil(eps^-2), robust to rounding in eps^-2.
std::size_t simplex_size(double eps);

}  // namespace coreset_lab
