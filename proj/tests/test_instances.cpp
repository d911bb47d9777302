#include "doctest.h"

#include <cmath>
#include <vector>

#include "coreset_lab/evaluation.hpp"
#include "coreset_lab/instances.hpp"
#include "coreset_lab/random.hpp"

using namespace coreset_lab;

TEST_CASE("exact beta of the four-point example") {
    const Dataset P = Dataset::from_flat({0, 1, 10, 11}, 1);
    const BetaEstimate b = estimate_beta(P, 2, BetaMode::exact, SeedConfig{});
    CHECK(b.opt_k == doctest::Approx(1.0));
    CHECK(b.opt_k_minus_1 == doctest::Approx(101.0));
    CHECK(b.beta == doctest::Approx(100.0));
}

TEST_CASE("gen_separated geometry") {
    const auto [P, tag] = gen_separated(3, 4, 5, 10.0, 0.5, 42);
    CHECK(P.size() == 12);
    CHECK(tag.kind == InstanceKind::stable);
    CHECK(tag.center_sq_distance == doctest::Approx(4.0 * 10.0 * 12 * 0.25 / 4));
    REQUIRE(tag.certified_beta.has_value());
    CHECK(tag.beta_certificate == "exact");
    // every point within the noise radius of its ball center
    const double a = std::sqrt(tag.center_sq_distance / 2.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        std::vector<double> c(5, 0.0);
        c[i / 4] = a;
        CHECK(squared_distance(P.point(i), c) <= 0.25 * (1 + 1e-12));
    }
    const auto again = gen_separated(3, 4, 5, 10.0, 0.5, 42);
    CHECK(again.first.coords() == P.coords());
    CHECK(again.second == tag);
}

TEST_CASE("gen_separated zero noise gives the infinite sentinel") {
    const auto [P, tag] = gen_separated(3, 2, 2, 5.0, 0.0, 1);
    REQUIRE(tag.certified_beta.has_value());
    CHECK(std::isinf(*tag.certified_beta));
    CHECK(brute_force_opt(P, 3).opt == 0.0);
}

TEST_CASE("gen_separated scaling of the center distance") {
    const auto a = gen_separated(2, 3, 1, 5.0, 1.0, 9);
    const auto b = gen_separated(2, 3, 1, 20.0, 1.0, 9);
    CHECK(b.second.center_sq_distance == doctest::Approx(4.0 * a.second.center_sq_distance));
}

TEST_CASE("gen_separated exact beta reaches 0.8 of the target") {
    Engine eng(1);
    double worst = INFINITY;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t k = 2 + seed % 3;
        const std::size_t n_per = 12 / k;
        const double target = 1.0 + 20.0 * uniform01(eng);
        const auto [P, tag] = gen_separated(k, n_per, 1 + seed % 3, target, 1.0, seed);
        REQUIRE(tag.beta_certificate == "exact");
        CHECK(*tag.certified_beta >= 0.8 * target);
        worst = std::min(worst, *tag.certified_beta / target);
    }
    MESSAGE("smallest certified/target ratio " << worst);
}

TEST_CASE("gen_separated lower-bound certificate is below the exact beta") {
    // same geometry, cluster sizes small enough for the exact oracle
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<std::size_t> sizes{3, 5, 4};
        const auto [P, tag] = gen_separated(sizes, 2, 8.0, 1.0, seed);
        REQUIRE(tag.beta_certificate == "exact");
        const double exact = *tag.certified_beta;
        const double gap = std::sqrt(tag.center_sq_distance) / 2.0 - 1.0;
        const double opt = brute_force_opt(P, 3).opt;
        CHECK(3.0 * gap * gap / opt - 1.0 <= exact * (1 + 1e-9));
    }
    const auto [big, big_tag] = gen_separated(10, 100, 10, 5.0, 1.0, 3);
    CHECK(big_tag.beta_certificate == "lower_bound");
    REQUIRE(big_tag.certified_beta.has_value());
    CHECK(*big_tag.certified_beta >= 1.0);
}

TEST_CASE("gen_separated collinear fallback") {
    const auto [P, tag] = gen_separated(4, 3, 1, 6.0, 0.5, 5);
    CHECK(P.dim() == 1);
    CHECK(*tag.certified_beta >= 0.8 * 6.0);
    CHECK_THROWS_AS(gen_separated(1, 3, 1, 6.0, 0.5, 5), ValidationError);
    CHECK_THROWS_AS(gen_separated(2, 3, 1, 6.0, -1.0, 5), ValidationError);
}

TEST_CASE("gen_simplex_lb examples and closed forms") {
    const auto [P, tag] = gen_simplex_lb(1, 0.1);
    CHECK(P.size() == 100);
    CHECK(P.dim() == 100);
    std::vector<std::size_t> all(100);
    for (std::size_t i = 0; i < 100; ++i) all[i] = i;
    const auto mean = centroid(P, all);
    for (double v : mean) CHECK(v == doctest::Approx(0.01));
    CHECK(total_cost(P, Solution::from_coords(mean, 100)) == doctest::Approx(99.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 100; i += 7)
        for (std::size_t j = i + 1; j < 100; j += 11)
            CHECK(squared_distance(P.point(i), P.point(j)) == 2.0);

    const auto [Q, qtag] = gen_simplex_lb(2, 0.25, 1e6);
    CHECK(qtag.block_size == 16);
    double closest = INFINITY;
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 16; j < 32; ++j)
            closest = std::min(closest, std::sqrt(squared_distance(Q.point(i), Q.point(j))));
    CHECK(closest >= 1e6 - 2);
    for (std::size_t b = 0; b < 2; ++b) {
        std::vector<std::size_t> block;
        for (std::size_t i = 0; i < 16; ++i) block.push_back(b * 16 + i);
        const auto c = centroid(Q, block);
        auto t = qtag.block_translation(b);
        for (std::size_t d = 0; d < 16; ++d)
            CHECK(c[d] == doctest::Approx(1.0 / 16 + t[d]).epsilon(1e-12));
        double cost = 0.0;
        for (std::size_t i : block) cost += squared_distance(Q.point(i), c);
        CHECK(std::abs(cost - 15.0) <= 1e-9 * 15.0 + 1e-9);
        CHECK(qtag.block_of(b * 16 + 3) == b);
    }
    CHECK(simplex_size(0.1) == 100);
    CHECK(simplex_size(0.3) == 12);
    CHECK_THROWS_AS(gen_simplex_lb(1, 0.7), ValidationError);
}

TEST_CASE("gen_blobs examples") {
    const auto [P, tag] = gen_blobs(3, 4, 2, 0.0, 10.0, 4);
    CHECK(brute_force_opt(P, 3).opt == 0.0);
    const auto [Q, qtag] = gen_blobs(1, 200, 2, 1.0, 10.0, 4);
    const ApproxSolution A = approx_solution(Q, 1, SeedConfig{});
    std::vector<std::size_t> all(200);
    for (std::size_t i = 0; i < 200; ++i) all[i] = i;
    const auto mean = centroid(Q, all);
    CHECK(A.centers.center(0)[0] == doctest::Approx(mean[0]));
    const auto [R, rtag] = gen_blobs(4, 1, 3, 2.0, 10.0, 4);
    CHECK(brute_force_opt(R, 4).opt == 0.0);
    CHECK(gen_blobs(3, 5, 2, 1.0, 10.0, 4).first.coords() == gen_blobs(3, 5, 2, 1.0, 10.0, 4).first.coords());
}

TEST_CASE("load_finite_metric examples") {
    const Dataset one = load_finite_metric({{0}});
    CHECK(one.size() == 1);
    CHECK(total_cost(one, Solution::from_indices({0})) == 0.0);

    const Dataset path = load_finite_metric({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, true);
    CHECK(brute_force_opt(path, 2).opt == 1.0);

    CHECK_THROWS_AS(load_finite_metric({{0, 1}, {2, 0}}), ValidationError);
    CHECK_THROWS_AS(load_finite_metric({{0, 1}, {1}}), ValidationError);
    CHECK_THROWS_AS(load_finite_metric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, true), ValidationError);
    CHECK_NOTHROW(load_finite_metric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, false));
}
