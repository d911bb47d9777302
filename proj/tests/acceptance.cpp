// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion ids...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "coreset_lab/diagnostics.hpp"
#include "coreset_lab/evaluation.hpp"
#include "coreset_lab/instances.hpp"
#include "coreset_lab/kmedian.hpp"
#include "coreset_lab/random.hpp"
#include "coreset_lab/sampler.hpp"
#include "coreset_lab/seeding.hpp"
#include "oracles.hpp"

using namespace coreset_lab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Dataset blobs(std::size_t k, std::size_t n_per, std::size_t dim, std::uint64_t seed,
              MetricKind metric = MetricKind::squared_euclidean) {
    return gen_blobs(k, n_per, dim, 1.0, 40.0, seed).first.with_metric(metric);
}

Solution random_points(const Dataset& P, std::size_t k, Engine& eng) {
    std::vector<std::size_t> ids;
    while (ids.size() < k) {
        const std::size_t i = uniform_index(eng, P.size());
        if (std::find(ids.begin(), ids.end(), i) == ids.end()) ids.push_back(i);
    }
    return Solution::from_points(P, ids);
}

// ---------------------------------------------------------------- 1, 11

Outcome mu_validity(MetricKind metric) {
    Engine eng(derive_seed(101, static_cast<std::uint64_t>(metric)));
    double worst_sum = 0.0, worst_family = 0.0, worst_oracle = 0.0;
    SeedConfig cfg;
    cfg.restarts = 1;
    cfg.lloyd_max_iters = 20;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + uniform_index(eng, 10);
        // n log-uniform in [k, 10^4]
        const double u = uniform01(eng);
        const std::size_t n_per = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::pow(10.0, 4.0 * u) / static_cast<double>(k)));
        const std::size_t dim = 1 + uniform_index(eng, 5);
        const Dataset P = gen_blobs(k, n_per, dim, 0.5 + 3 * uniform01(eng), 50.0, eng())
                              .first.with_metric(metric);
        cfg.rng_seed = eng();
        const ApproxSolution A = approx_solution(P, std::min(k, P.size()), cfg);
        const SamplingDistribution d = compute_mu(P, A);
        const auto expect = oracle::mu_terms(P, A);
        CompensatedSum total;
        std::array<CompensatedSum, 4> fam;
        for (std::size_t i = 0; i < P.size(); ++i) {
            total += d.mu[i];
            double o = 0.0;
            for (int t = 0; t < 4; ++t) {
                fam[t] += d.terms[i][t];
                o += expect[i][t];
            }
            worst_oracle = std::max(worst_oracle, std::abs(d.mu[i] - o) / o);
        }
        worst_sum = std::max(worst_sum, std::abs(total.value() - 1.0));
        for (int t = 0; t < 4; ++t) worst_family = std::max(worst_family, std::abs(fam[t].value() - 0.25));
    }
    Outcome r;
    r.pass = worst_sum <= 1e-9 && worst_family <= 1e-9 && worst_oracle <= 1e-12;
    r.detail = fmt("100 instances, max |sum mu - 1| = %.2e, max |term sum - 1/4| = %.2e, "
                   "max rel. dev. from formula = %.2e", worst_sum, worst_family, worst_oracle);
    return r;
}

// ---------------------------------------------------------------- 2, 11

Outcome unbiasedness(MetricKind metric) {
    const Dataset P = blobs(5, 400, 3, 202, metric);
    SeedConfig cfg;
    const ApproxSolution A = approx_solution(P, 5, cfg);
    const SensitivitySampler sampler(P, A);
    Engine eng(203);
    Outcome r;
    r.pass = true;
    double worst_z = 0.0;
    for (int s = 0; s < 5; ++s) {
        const Solution S = random_points(P, 5, eng);
        const double truth = total_cost(P, S);
        CompensatedSum sum, sq;
        const int draws = 10000;
        for (int t = 0; t < draws; ++t) {
            const double e = estimate_cost(sampler.draw(50, derive_seed(204, s, t)), S);
            sum += e;
            sq += e * e;
        }
        const double mean = sum.value() / draws;
        const double var = (sq.value() - draws * mean * mean) / (draws - 1);
        const double se = std::sqrt(var / draws);
        const double z = std::abs(mean - truth) / se;
        worst_z = std::max(worst_z, z);
        r.pass = r.pass && z <= 3.0;
        r.notes.push_back(fmt("S%d: cost %.6g, mean estimate %.6g, |z| = %.2f", s, truth, mean, z));
    }
    r.detail = fmt("n=2000, k=5, m=50, 10000 coresets per S, max |z| = %.2f (limit 3)", worst_z);
    return r;
}

// ---------------------------------------------------------------- 3, 11

Outcome weight_bounds(MetricKind metric) {
    Engine eng(derive_seed(301, static_cast<std::uint64_t>(metric)));
    std::size_t entries = 0, violations = 0, instances = 0;
    SeedConfig cfg;
    cfg.restarts = 2;
    while (entries < 1000000) {
        Dataset P;
        std::size_t k = 0;
        switch (instances % 4) {
            case 0:
                k = 1 + uniform_index(eng, 8);
                P = gen_blobs(k, 50 + uniform_index(eng, 500), 1 + uniform_index(eng, 4), 1.0, 30.0, eng()).first;
                break;
            case 1: {
                k = 2 + uniform_index(eng, 4);
                std::vector<std::size_t> sizes(k);
                for (auto& s : sizes) s = 1 + uniform_index(eng, 600);
                sizes[0] = 1 + uniform_index(eng, 3);
                P = gen_separated(sizes, 1 + uniform_index(eng, 6), 5.0, 1.0, eng()).first;
                break;
            }
            case 2:
                k = 1 + uniform_index(eng, 3);
                P = gen_simplex_lb(k, 0.2 + 0.3 * uniform01(eng)).first;
                break;
            default: {
                // heavy duplicates and exact zero-cost clusters
                k = 2 + uniform_index(eng, 4);
                std::vector<double> xs;
                for (std::size_t j = 0; j < k; ++j) {
                    const double c = 100.0 * j;
                    const std::size_t cnt = 1 + uniform_index(eng, 200);
                    for (std::size_t t = 0; t < cnt; ++t) xs.push_back(j % 2 ? c : c + standard_normal(eng));
                }
                P = Dataset::from_flat(xs, 1);
            }
        }
        P = P.with_metric(metric);
        cfg.rng_seed = eng();
        const ApproxSolution A = approx_solution(P, std::min(k, P.size()), cfg);
        const std::size_t m = 1000 + uniform_index(eng, 40000);
        const Coreset c = sensitivity_sample(P, A, m, eng());
        violations += check_weight_bounds(P, A, c).size();
        entries += c.size();
        ++instances;
    }
    Outcome r;
    r.pass = violations == 0;
    r.detail = fmt("%zu entries over %zu instances, %zu violations", entries, instances, violations);
    return r;
}

// ---------------------------------------------------------------- 4

Outcome event_e() {
    const std::size_t k = 5;
    const double eps = 0.2;
    const std::size_t m = static_cast<std::size_t>(std::ceil(48.0 * k / (eps * eps) * std::log(10.0 * k / eps)));
    const Dataset P = blobs(k, 1000, 2, 401);
    const ApproxSolution A = approx_solution(P, k, SeedConfig{});
    const SensitivitySampler sampler(P, A);
    std::size_t pass = 0, p1 = 0, p2 = 0, p3 = 0;
    const std::size_t trials = 200;
    for (std::size_t t = 0; t < trials; ++t) {
        const EventEReport e = check_event_e(P, A, sampler.draw(m, derive_seed(402, t)), eps);
        pass += e.pass;
        p1 += e.p1_pass;
        p2 += e.p2_pass;
        p3 += e.p3_pass;
    }
    Outcome r;
    const double rate = double(pass) / trials;
    r.pass = rate >= 0.95;
    r.detail = fmt("m=%zu, n=5000, pass rate %.3f (P1 %zu, P2 %zu, P3 %zu of %zu)", m, rate, p1, p2, p3, trials);
    return r;
}

// ---------------------------------------------------------------- 5

Outcome scaling() {
    const Dataset P = gen_blobs(10, 5000, 5, 1.0, 30.0, 501).first;
    SeedConfig cfg;
    cfg.restarts = 2;
    const ApproxSolution A = approx_solution(P, 10, cfg);
    CandidateSpec spec{{{Family::random_data_points, 100},
                        {Family::perturb_A, 100},
                        {Family::lloyd_random_restarts, 50},
                        {Family::random_box, 40},
                        {Family::drop_one_center, 10}}};
    spec.perturb_scale = 1.0;
    spec.seed = 502;
    const CandidatePool pool = make_pool(P, generate_candidates(P, A, spec));
    SweepConfig sc;
    sc.algorithms = {Algorithm::sensitivity};
    sc.m_list = {200, 800, 3200};
    sc.trials = 50;
    sc.seed = 503;
    const ScalingFit fit = scaling_fit(sweep(P, A, pool, sc), Algorithm::sensitivity);
    Outcome r;
    r.pass = fit.slope >= -0.65 && fit.slope <= -0.35;
    r.detail = fmt("%zu candidates, median sup %.4g / %.4g / %.4g at m=200/800/3200, slope %.3f",
                   pool.candidates.size(), fit.median_sup[0], fit.median_sup[1], fit.median_sup[2], fit.slope);
    return r;
}

// ---------------------------------------------------------------- 6

std::vector<double> sup_errors(const Dataset& P, const ApproxSolution& A, const CandidatePool& pool,
                               Algorithm alg, std::size_t m, std::size_t trials, std::uint64_t seed) {
    SweepConfig sc;
    sc.algorithms = {alg};
    sc.m_list = {m};
    sc.trials = trials;
    sc.seed = seed;
    std::vector<double> out;
    for (const auto& row : sweep(P, A, pool, sc)) out.push_back(row.sup_rel_error);
    return out;
}

CandidateSpec full_family(std::uint64_t seed) {
    CandidateSpec spec{{{Family::random_data_points, 60},
                        {Family::random_box, 30},
                        {Family::lloyd_random_restarts, 20},
                        {Family::perturb_A, 60},
                        {Family::drop_one_center, 0}}};
    spec.seed = seed;
    return spec;
}

Outcome stable_quality() {
    const std::size_t k = 10;
    const double eps = 0.25;
    const std::size_t m = static_cast<std::size_t>(50.0 * k / (eps * eps));
    const auto [P, tag] = gen_separated(k, 200, 10, 10.0, 1.0, 601);
    Outcome r;
    const double beta = tag.certified_beta.value_or(0.0);
    const ApproxSolution A = approx_solution(P, k, SeedConfig{});
    const CandidatePool pool = make_pool(P, generate_candidates(P, A, full_family(602), &tag));
    const auto sens = sup_errors(P, A, pool, Algorithm::sensitivity, m, 50, 603);
    std::size_t good = 0;
    for (double e : sens) good += e <= eps;

    const auto [Q, qtag] = gen_separated(std::vector<std::size_t>{2, 10000}, 10, 10.0, 1.0, 604);
    const ApproxSolution B = approx_solution(Q, 2, SeedConfig{});
    const CandidatePool qpool = make_pool(Q, generate_candidates(Q, B, full_family(605), &qtag));
    const double qs = median(sup_errors(Q, B, qpool, Algorithm::sensitivity, m, 50, 606));
    const double qu = median(sup_errors(Q, B, qpool, Algorithm::uniform, m, 50, 606));

    r.pass = beta >= 1.0 && good >= 45 && qu > qs;
    r.detail = fmt("certified beta %.3g (%s), m=%zu, sup <= eps in %zu/50 trials over %zu candidates; "
                   "skewed sizes (2, 10^4): median sup sensitivity %.4g < uniform %.4g",
                   beta, tag.beta_certificate.c_str(), m, good, pool.candidates.size(), qs, qu);
    r.notes.push_back(fmt("skewed instance certified beta %.3g (%s)", qtag.certified_beta.value_or(0.0),
                          qtag.beta_certificate.c_str()));
    return r;
}

// ---------------------------------------------------------------- 7

Coreset basis_points(std::size_t n, std::size_t r) {
    Coreset c;
    c.entries.dim = n;
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        c.entries.push_back(e, i, 1.0);
    }
    c.m = r;
    return c;
}

Outcome simplex() {
    const double eps = 0.1;
    const auto [P, tag] = gen_simplex_lb(1, eps);
    const std::size_t n = P.size();
    Outcome r;

    // (a) closed forms with unit weights
    double worst_cost = 0.0, worst_dist = 0.0;
    for (std::size_t size = 1; size <= n; ++size) {
        const Coreset c = basis_points(n, size);
        const auto s = adversarial_center(c);
        const Solution S = Solution::from_coords(s, n);
        worst_cost = std::max(worst_cost, std::abs(total_cost(P, S) - oracle::simplex_true_cost(n, size)));
        for (std::size_t i = 0; i < size; ++i)
            worst_dist = std::max(worst_dist, std::abs(squared_distance(P.point(i), s) -
                                                       oracle::simplex_entry_cost(size)));
    }
    const bool a = worst_cost <= 1e-9 && worst_dist <= 1e-9;

    // (b) every builder, every m up to n, several seeds
    const ApproxSolution A = approx_solution(P, 1, SeedConfig{});
    const SensitivitySampler sampler(P, A);
    std::size_t qualifying = 0, below = 0, small = 0, small_below = 0;
    std::size_t first_bad = 0;
    double min_err = INFINITY;
    for (Algorithm alg : {Algorithm::sensitivity, Algorithm::uniform, Algorithm::offset}) {
        for (std::size_t m = 1; m <= 2 * n; ++m) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                Coreset c;
                const std::uint64_t s = derive_seed(701, m, seed);
                if (alg == Algorithm::sensitivity) c = sampler.draw(m, s);
                else if (alg == Algorithm::uniform) c = uniform_sample(P, m, s);
                else c = offset_coreset(P, A);
                const Coreset compacted = compact(c);
                bool basis = true;
                for (std::size_t e = 0; e < compacted.size() && basis; ++e) {
                    std::size_t ones = 0;
                    for (double v : compacted.entries.point(e)) {
                        if (v == 1.0) ++ones;
                        else if (v != 0.0) basis = false;
                    }
                    basis = basis && ones == 1;
                }
                const double W = compacted.entries.total_weight();
                if (!basis || compacted.size() > 50 || W < (1 - eps) * n) continue;
                ++qualifying;
                const Solution S = Solution::from_coords(adversarial_center(compacted), n);
                const double err = relative_error(P, compacted, S);
                const bool exceeds = err > eps;
                if (!exceeds) {
                    ++below;
                    if (first_bad == 0 || compacted.size() < first_bad) first_bad = compacted.size();
                }
                if (compacted.size() <= 40) {
                    ++small;
                    small_below += !exceeds;
                }
                min_err = std::min(min_err, err);
                if (alg == Algorithm::offset) break;
            }
            if (alg == Algorithm::offset) break;
        }
    }
    const bool b = qualifying > 0 && below == 0;
    r.pass = a && b;
    r.detail = fmt("(a) max closed-form deviation %.2e / %.2e: %s; (b) %zu qualifying coresets, "
                   "%zu with error <= eps (smallest such |Omega| = %zu), min error %.4f: %s",
                   worst_cost, worst_dist, a ? "ok" : "fail", qualifying, below, first_bad, min_err,
                   b ? "ok" : "fail");
    r.notes.push_back(fmt("with total weight n the error at the adversarial center is "
                          "(n/sqrt(r) - sqrt(r))/(n - sqrt(r)); at n=100 it is %.4f for r=40, "
                          "%.4f for r=41 and %.4f for r=50",
                          oracle::simplex_error(100, 40, 100), oracle::simplex_error(100, 41, 100),
                          oracle::simplex_error(100, 50, 100)));
    r.notes.push_back(fmt("restricted to |Omega| <= 40: %zu coresets, %zu with error <= eps", small, small_below));
    return r;
}

// ---------------------------------------------------------------- 8

bool one_center_per_cluster(const Dataset& P, const Clustering& cl, const Solution& S) {
    std::vector<std::size_t> serving(cl.sizes.size(), npos);
    for (std::size_t i = 0; i < P.size(); ++i) {
        const std::size_t j = cl.assignment[i];
        const std::size_t c = nearest_center(P, i, S).index;
        if (serving[j] == npos) serving[j] = c;
        else if (serving[j] != c) return false;
    }
    return true;
}

Outcome offset() {
    const double eps = 0.5;
    const auto [P, tag] = gen_separated(3, 4, 2, 5000.0, 1.0, 801);
    const BetaEstimate beta = estimate_beta(P, 3, BetaMode::exact, SeedConfig{});
    const ExactOptimum opt = brute_force_opt(P, 3);
    const ApproxSolution A = approx_solution(P, 3, SeedConfig{});
    const Coreset c = offset_coreset(P, A);

    CandidateSpec spec{{{Family::random_data_points, 125},
                        {Family::random_box, 125},
                        {Family::lloyd_random_restarts, 125},
                        {Family::perturb_A, 125}}};
    spec.seed = 802;
    spec.perturb_scale = 3.0;
    const auto cands = generate_candidates(P, A, spec);
    const SupError sup = sup_error(P, c, cands);

    // extra one-center-per-cluster solutions: each center jittered inside its ball
    std::vector<Candidate> per;
    Engine eng(803);
    const double radius = std::sqrt(tag.center_sq_distance) / 4.0;
    for (int t = 0; t < 200; ++t) {
        Solution S = A.centers;
        for (std::size_t j = 0; j < 3; ++j)
            for (double& v : S.center(j)) v += radius * (2 * uniform01(eng) - 1) / std::sqrt(2.0);
        per.push_back({S, Family::perturb_A});
    }
    for (const auto& cand : cands) per.push_back(cand);
    std::size_t checked = 0;
    double worst = 0.0;
    for (const auto& cand : per) {
        if (!one_center_per_cluster(P, A.clustering, cand.centers)) continue;
        ++checked;
        worst = std::max(worst, relative_error(P, c, cand.centers));
    }
    Outcome r;
    r.pass = beta.beta > 512.0 / (eps * eps) && A.total() <= opt.opt * (1 + 1e-12) &&
             sup.max <= eps && checked > 0 && worst <= 1e-9;
    r.detail = fmt("exact beta %.4g (need > %g), %zu entries, sup error %.3g over %zu candidates; "
                   "max error %.2e over %zu one-center-per-cluster candidates",
                   beta.beta, 512.0 / (eps * eps), c.size(), sup.max, sup.evaluated, worst, checked);
    return r;
}

// ---------------------------------------------------------------- 9

Outcome oracles() {
    const Dataset four = Dataset::from_flat({0, 1, 10, 11}, 1);
    const BetaEstimate b = estimate_beta(four, 2, BetaMode::exact, SeedConfig{});
    const bool beta_ok = std::abs(b.beta - 100.0) <= 1e-9 * 100.0;
    Engine eng(901);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + uniform_index(eng, 9), k = 1 + uniform_index(eng, 3);
        const std::size_t dim = 1 + uniform_index(eng, 3);
        std::vector<double> c(n * dim);
        for (double& v : c) v = 5.0 * standard_normal(eng);
        const Dataset P = Dataset::from_flat(c, dim);
        const double a = brute_force_opt(P, k).opt, e = oracle::exhaustive_kmeans(P, k);
        worst = std::max(worst, std::abs(a - e) / std::max(1.0, e));
    }
    Outcome r;
    r.pass = beta_ok && worst <= 1e-9;
    r.detail = fmt("beta on {0,1,10,11} = %.12g; max deviation from exhaustive labeling %.2e over 50 instances",
                   b.beta, worst);
    return r;
}

// ---------------------------------------------------------------- 10

Outcome separation() {
    Engine eng(1001);
    std::size_t violations = 0, instances = 0;
    double min_beta = INFINITY;
    while (instances < 50) {
        const std::size_t k = 2 + uniform_index(eng, 3);
        std::vector<std::size_t> sizes(k);
        std::size_t n = 0;
        for (auto& s : sizes) {
            s = 1 + uniform_index(eng, 4);
            n += s;
        }
        if (n > 12) continue;
        const double target = 1.0 + 30.0 * uniform01(eng);
        const auto [P, tag] = gen_separated(sizes, 1 + uniform_index(eng, 3), target, 1.0, eng());
        if (tag.beta_certificate != "exact" || !tag.certified_beta || std::isinf(*tag.certified_beta)) continue;
        const ExactOptimum opt = brute_force_opt(P, k);
        violations += check_separation(P, opt.clustering, *tag.certified_beta, opt.opt).size();
        min_beta = std::min(min_beta, *tag.certified_beta);
        ++instances;
    }
    Outcome r;
    r.pass = violations == 0;
    r.detail = fmt("%zu instances (smallest beta %.3g), %zu violations", instances, min_beta, violations);
    return r;
}

// ---------------------------------------------------------------- 11

Outcome kmedian_parity() {
    const Outcome a = mu_validity(MetricKind::euclidean);
    const Outcome b = unbiasedness(MetricKind::euclidean);
    const Outcome c = weight_bounds(MetricKind::euclidean);
    // the pipeline entry point runs in the same mode
    const PipelineResult p = run_pipeline(blobs(3, 100, 2, 1101), 3, 500, ObjectiveMode::kmedian(),
                                          SeedConfig{}, 0.5, 1102);
    Outcome r;
    r.pass = a.pass && b.pass && c.pass && p.coreset.metric == MetricKind::euclidean;
    r.detail = fmt("mu validity %s, unbiasedness %s, weight bound %s", a.pass ? "ok" : "FAIL",
                   b.pass ? "ok" : "FAIL", c.pass ? "ok" : "FAIL");
    r.notes = {"(1) " + a.detail, "(2) " + b.detail, "(3) " + c.detail};
    return r;
}

// ---------------------------------------------------------------- 12

Outcome merge_linearity() {
    Engine eng(1201);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const MetricKind metric = t % 2 ? MetricKind::euclidean : MetricKind::squared_euclidean;
        const std::size_t k = 1 + uniform_index(eng, 4);
        const Dataset P = gen_blobs(k, 20 + uniform_index(eng, 50), 1 + uniform_index(eng, 3), 1.0, 20.0, eng())
                              .first.with_metric(metric);
        SeedConfig cfg;
        cfg.restarts = 1;
        cfg.rng_seed = eng();
        const ApproxSolution A = approx_solution(P, k, cfg);
        Coreset c1 = sensitivity_sample(P, A, 1 + uniform_index(eng, 200), eng());
        const Coreset c2 = t % 3 ? uniform_sample(P, 1 + uniform_index(eng, 200), eng())
                                 : sensitivity_sample(P, A, 1 + uniform_index(eng, 200), eng());
        const Solution S = random_points(P, std::min<std::size_t>(P.size(), 1 + uniform_index(eng, 5)), eng);
        const double lhs = estimate_cost(merge(c1, c2), S);
        const double rhs = estimate_cost(c1, S) + estimate_cost(c2, S);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
    }
    Outcome r;
    r.pass = worst <= 1e-9;
    r.detail = fmt("1000 triples, max relative deviation %.2e", worst);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "mu validity", 10, [] { return mu_validity(MetricKind::squared_euclidean); }},
        {2, "estimator unbiasedness", 60, [] { return unbiasedness(MetricKind::squared_euclidean); }},
        {3, "weight bound", 30, [] { return weight_bounds(MetricKind::squared_euclidean); }},
        {4, "event E frequency", 120, event_e},
        {5, "error-vs-size scaling", 600, scaling},
        {6, "stable-instance quality", 600, stable_quality},
        {7, "simplex lower bound", 10, simplex},
        {8, "offset coreset", 30, offset},
        {9, "oracle equivalence", 60, oracles},
        {10, "separation invariant", 60, separation},
        {11, "k-median parity", 120, kmedian_parity},
        {12, "merge linearity", 5, merge_linearity},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("[%s] %2d %s: %s (%.1f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", too slow");
        for (const auto& n : o.notes) std::printf("        %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed ? 1 : 0;
}
