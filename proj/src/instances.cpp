#include "coreset_lab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coreset_lab/evaluation.hpp"
#include "coreset_lab/random.hpp"

namespace coreset_lab {

std::string_view to_string(InstanceKind kind) {
    switch (kind) {
    case InstanceKind::stable: return "stable";
    case InstanceKind::simplex_lb: return "simplex_lb";
    case InstanceKind::blobs: return "blobs";
    case InstanceKind::finite: return "finite";
    }
    return "unknown";
}

InstanceKind instance_kind_from_string(std::string_view name) {
    if (name == "stable") return InstanceKind::stable;
    if (name == "simplex_lb" || name == "simplex") return InstanceKind::simplex_lb;
    if (name == "blobs") return InstanceKind::blobs;
    if (name == "finite") return InstanceKind::finite;
    throw ValidationError("unknown instance kind '" + std::string(name) + "'");
}

std::size_t InstanceTag::block_of(std::size_t point) const {
    if (kind == InstanceKind::simplex_lb) {
        if (block_size == 0) throw ValidationError("simplex tag without a block size");
        return point / block_size;
    }
    std::size_t start = 0;
    for (std::size_t b = 0; b < cluster_sizes.size(); ++b) {
        start += cluster_sizes[b];
        if (point < start) return b;
    }
    throw ValidationError("point index outside the tagged instance");
}

std::vector<double> InstanceTag::block_translation(std::size_t block) const {
    std::vector<double> t(dim, 0.0);
    if (kind == InstanceKind::simplex_lb && dim > 0)
        t[0] = static_cast<double>(block) * separation;
    return t;
}

namespace {

void uniform_in_ball(Engine& eng, double radius, std::span<double> out) {
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& v : out) {
            v = standard_normal(eng);
            norm2 += v * v;
        }
    } while (norm2 == 0.0);
    const double scale =
        radius * std::pow(uniform01(eng), 1.0 / static_cast<double>(out.size())) / std::sqrt(norm2);
    for (double& v : out) v *= scale;
}

}  // namespace

Instance gen_separated(const std::vector<std::size_t>& sizes, std::size_t dim, double target_beta,
                       double noise_radius, std::uint64_t seed) {
    const std::size_t k = sizes.size();
    if (k < 2) throw ValidationError("gen_separated needs k >= 2");
    if (dim == 0) throw ValidationError("dimension must be positive");
    if (!(noise_radius >= 0.0)) throw ValidationError("noise_radius must be nonnegative");
    if (!(target_beta > 0.0)) throw ValidationError("target_beta must be positive");
    const std::size_t min_size = *std::min_element(sizes.begin(), sizes.end());
    if (min_size == 0) throw ValidationError("every cluster needs at least one point");
    const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});

    const double r2 = noise_radius * noise_radius;
    double D = 4.0 * target_beta * static_cast<double>(n) * r2 / static_cast<double>(min_size);
    if (!(D > 0.0)) D = 1.0;  // zero noise: any distinct centers give OPT_k = 0

    std::vector<double> centers(k * dim, 0.0);
    if (dim >= k) {
        const double a = std::sqrt(D / 2.0);
        for (std::size_t i = 0; i < k; ++i) centers[i * dim + i] = a;
    } else {
        const double gap = std::sqrt(D);
        for (std::size_t i = 0; i < k; ++i) centers[i * dim] = static_cast<double>(i) * gap;
    }

    Engine eng(derive_seed(seed, 0x5eafULL));
    std::vector<double> coords(n * dim);
    std::vector<std::size_t> labels(n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t s = 0; s < sizes[c]; ++s, ++row) {
            std::span<double> p(coords.data() + row * dim, dim);
            uniform_in_ball(eng, noise_radius, p);
            for (std::size_t d = 0; d < dim; ++d) p[d] += centers[c * dim + d];
            labels[row] = c;
        }
    }
    Dataset P = Dataset::from_flat(std::move(coords), dim);

    InstanceTag tag;
    tag.kind = InstanceKind::stable;
    tag.k = k;
    tag.dim = dim;
    tag.seed = seed;
    tag.cluster_sizes = sizes;
    tag.target_beta = target_beta;
    tag.noise_radius = noise_radius;
    tag.center_sq_distance = D;

    if (n <= 12) {
        const BetaEstimate b = estimate_beta(P, k, BetaMode::exact, SeedConfig{});
        tag.certified_beta = b.beta;
        tag.beta_certificate = "exact";
    } else {
        // Any (k-1)-clustering leaves two balls without a private center, so
        // the smaller one pays at least (sqrt(D)/2 - r)^2 per point.
        const double gap = std::sqrt(D) / 2.0 - noise_radius;
        if (gap > 0.0) {
            std::vector<double> flat;
            std::vector<std::vector<std::size_t>> members(k);
            for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
            for (std::size_t c = 0; c < k; ++c) {
                const auto mean = centroid(P, members[c]);
                flat.insert(flat.end(), mean.begin(), mean.end());
            }
            const double upper = total_cost(P, Solution::from_coords(std::move(flat), dim));
            const double lower = static_cast<double>(min_size) * gap * gap;
            tag.certified_beta =
                upper > 0.0 ? lower / upper - 1.0 : std::numeric_limits<double>::infinity();
            tag.beta_certificate = "lower_bound";
        }
    }
    return {std::move(P), std::move(tag)};
}

Instance gen_separated(std::size_t k, std::size_t n_per, std::size_t dim, double target_beta,
                       double noise_radius, std::uint64_t seed) {
    if (n_per == 0) throw ValidationError("n_per must be at least 1");
    return gen_separated(std::vector<std::size_t>(k, n_per), dim, target_beta, noise_radius, seed);
}

std::size_t simplex_size(double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps must lie in (0, 1/2]");
    return static_cast<std::size_t>(std::ceil(1.0 / (eps * eps) - 1e-9));
}

Instance gen_simplex_lb(std::size_t k, double eps, double separation) {
    if (k == 0) throw ValidationError("k must be at least 1");
    if (!(separation > 0.0)) throw ValidationError("separation must be positive");
    const std::size_t n = simplex_size(eps);
    std::vector<double> coords(k * n * n, 0.0);
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t i = 0; i < n; ++i) {
            double* p = coords.data() + (b * n + i) * n;
            p[i] = 1.0;
            p[0] += static_cast<double>(b) * separation;
        }
    InstanceTag tag;
    tag.kind = InstanceKind::simplex_lb;
    tag.k = k;
    tag.dim = n;
    tag.eps = eps;
    tag.separation = separation;
    tag.block_size = n;
    tag.cluster_sizes.assign(k, n);
    return {Dataset::from_flat(std::move(coords), n), std::move(tag)};
}

Instance gen_blobs(const std::vector<std::size_t>& sizes, std::size_t dim, double sigma,
                   double spread, std::uint64_t seed) {
    const std::size_t k = sizes.size();
    if (k == 0) throw ValidationError("k must be at least 1");
    if (dim == 0) throw ValidationError("dimension must be positive");
    if (!(sigma >= 0.0) || !(spread >= 0.0)) throw ValidationError("sigma and spread must be >= 0");
    const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (n == 0) throw ValidationError("blobs need at least one point");

    Engine eng(derive_seed(seed, 0xb10bULL));
    std::vector<double> centers(k * dim);
    for (double& c : centers) c = spread * uniform01(eng);
    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t s = 0; s < sizes[c]; ++s)
            for (std::size_t d = 0; d < dim; ++d)
                coords.push_back(centers[c * dim + d] + sigma * standard_normal(eng));

    InstanceTag tag;
    tag.kind = InstanceKind::blobs;
    tag.k = k;
    tag.dim = dim;
    tag.seed = seed;
    tag.cluster_sizes = sizes;
    tag.sigma = sigma;
    tag.spread = spread;
    return {Dataset::from_flat(std::move(coords), dim), std::move(tag)};
}

Instance gen_blobs(std::size_t k, std::size_t n_per, std::size_t dim, double sigma, double spread,
                   std::uint64_t seed) {
    return gen_blobs(std::vector<std::size_t>(k, n_per), dim, sigma, spread, seed);
}

Dataset load_finite_metric(const std::vector<std::vector<double>>& matrix,
                           bool validate_triangle) {
    const std::size_t n = matrix.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n)
            throw ValidationError("distance matrix row " + std::to_string(i) + " has " +
                                  std::to_string(matrix[i].size()) + " entries, expected " +
                                  std::to_string(n));
        flat.insert(flat.end(), matrix[i].begin(), matrix[i].end());
    }
    Dataset P = Dataset::from_matrix(std::move(flat), n);
    if (validate_triangle) {
        const auto bad = triangle_violations(P, 1e-9, 1);
        if (!bad.empty())
            throw ValidationError("triangle inequality fails for (" + std::to_string(bad[0].i) +
                                  ", " + std::to_string(bad[0].j) + ", " +
                                  std::to_string(bad[0].l) + ")");
    }
    return P;
}

}  // namespace coreset_lab
