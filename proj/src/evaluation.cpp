#include "coreset_lab/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <map>
#include <optional>
#include <set>

#include "coreset_lab/diagnostics.hpp"
#include "coreset_lab/parallel.hpp"
#include "coreset_lab/random.hpp"

namespace coreset_lab {

double estimate_cost(const Coreset& omega, const Solution& S, const Dataset* space) {
    if (S.empty()) throw ValidationError("empty solution");
    if (omega.metric == MetricKind::finite_matrix) {
        if (!S.indexed()) throw ValidationError("finite-matrix coreset needs index centers");
    } else {
        if (S.indexed()) throw ValidationError("coordinate coreset needs coordinate centers");
        if (omega.size() > 0 && S.dim() != omega.entries.dim)
            throw ValidationError("dimension mismatch: coreset " +
                                  std::to_string(omega.entries.dim) + ", solution " +
                                  std::to_string(S.dim()));
    }
    return total_cost(omega.entries, S, omega.metric, space) + omega.offset;
}

double relative_error(double true_cost, double estimate) {
    if (!(true_cost > 0.0))
        throw ZeroCostError("relative error is undefined at a zero-cost solution");
    return std::abs(true_cost - estimate) / true_cost;
}

double relative_error(const Dataset& P, const Coreset& omega, const Solution& S) {
    if (omega.metric != P.metric()) throw ValidationError("coreset metric does not match dataset");
    return relative_error(total_cost(P, S), estimate_cost(omega, S, &P));
}

std::string_view to_string(Family f) {
    switch (f) {
    case Family::random_data_points: return "random_data_points";
    case Family::random_box: return "random_box";
    case Family::lloyd_random_restarts: return "lloyd_random_restarts";
    case Family::perturb_A: return "perturb_A";
    case Family::drop_one_center: return "drop_one_center";
    case Family::adversarial_simplex: return "adversarial_simplex";
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    for (Family f : {Family::random_data_points, Family::random_box, Family::lloyd_random_restarts,
                     Family::perturb_A, Family::drop_one_center, Family::adversarial_simplex})
        if (to_string(f) == name) return f;
    throw ValidationError("unknown candidate family '" + std::string(name) + "'");
}

std::vector<Family> parse_families(std::string_view list) {
    std::vector<Family> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = list.substr(0, comma);
        if (!item.empty()) out.push_back(family_from_string(item));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ValidationError("empty candidate family list");
    return out;
}

CandidateSpec CandidateSpec::uniform(const std::vector<Family>& families, std::size_t count,
                                     std::uint64_t seed) {
    CandidateSpec spec;
    for (Family f : families) spec.families.push_back({f, count});
    spec.seed = seed;
    return spec;
}

namespace {

std::vector<std::size_t> distinct_indices(Engine& eng, std::size_t n, std::size_t k) {
    // partial Fisher-Yates over a sparse permutation
    std::vector<std::size_t> out;
    out.reserve(k);
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    auto lookup = [&](std::size_t i) {
        for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
            if (it->first == i) return it->second;
        return i;
    };
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t j = t + uniform_index(eng, n - t);
        const std::size_t vj = lookup(j);
        const std::size_t vt = lookup(t);
        out.push_back(vj);
        swaps.emplace_back(j, vt);
        swaps.emplace_back(t, vj);
    }
    return out;
}

Solution simplex_attack(Engine& eng, const InstanceTag& tag) {
    const std::size_t n = tag.block_size;
    std::vector<double> flat;
    flat.reserve(tag.k * tag.dim);
    for (std::size_t b = 0; b < tag.k; ++b) {
        const std::size_t r = 1 + uniform_index(eng, n);
        std::vector<double> s = tag.block_translation(b);
        const double v = 1.0 / std::sqrt(static_cast<double>(r));
        for (std::size_t i : distinct_indices(eng, n, r)) s[i] += v;
        flat.insert(flat.end(), s.begin(), s.end());
    }
    return Solution::from_coords(std::move(flat), tag.dim);
}

}  // namespace

std::vector<Candidate> generate_candidates(const Dataset& P, const ApproxSolution& A,
                                           const CandidateSpec& spec, const InstanceTag* tag) {
    const std::size_t k = A.k();
    const std::size_t n = P.size();
    if (k == 0) throw ValidationError("reference solution has no centers");
    if (A.clustering.assignment.size() != n)
        throw ValidationError("reference solution was not computed over this dataset");
    if (!(spec.perturb_scale >= 0.0)) throw ValidationError("perturbation scale must be >= 0");

    std::vector<Candidate> out;
    for (std::size_t fi = 0; fi < spec.families.size(); ++fi) {
        const auto [family, count] = spec.families[fi];
        Engine eng(derive_seed(spec.seed, static_cast<std::uint64_t>(family), fi));
        switch (family) {
        case Family::random_data_points: {
            if (k > n) throw ValidationError("random_data_points needs k <= n");
            for (std::size_t c = 0; c < count; ++c) {
                const auto ids = distinct_indices(eng, n, k);
                out.push_back({Solution::from_points(P, ids), family});
            }
            break;
        }
        case Family::random_box: {
            if (P.is_finite()) throw ValidationError("random_box needs coordinates");
            const std::size_t d = P.dim();
            std::vector<double> lo(d, std::numeric_limits<double>::infinity());
            std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
            for (std::size_t i = 0; i < n; ++i) {
                auto p = P.point(i);
                for (std::size_t t = 0; t < d; ++t) {
                    lo[t] = std::min(lo[t], p[t]);
                    hi[t] = std::max(hi[t], p[t]);
                }
            }
            for (std::size_t c = 0; c < count; ++c) {
                std::vector<double> flat(k * d);
                for (std::size_t j = 0; j < k; ++j)
                    for (std::size_t t = 0; t < d; ++t)
                        flat[j * d + t] = lo[t] + (hi[t] - lo[t]) * uniform01(eng);
                out.push_back({Solution::from_coords(std::move(flat), d), family});
            }
            break;
        }
        case Family::lloyd_random_restarts: {
            SeedConfig cfg;
            cfg.lloyd_max_iters = spec.lloyd_iters;
            const int power = P.metric() == MetricKind::euclidean ? 1 : 2;
            for (std::size_t c = 0; c < count; ++c) {
                Solution s0 = d2_seed(P, k, power, eng());
                out.push_back({lloyd(P, std::move(s0), cfg).centers, family});
            }
            break;
        }
        case Family::perturb_A: {
            if (P.is_finite()) {
                std::vector<std::vector<std::size_t>> members(k);
                for (std::size_t i = 0; i < n; ++i) members[A.clustering.assignment[i]].push_back(i);
                const double p = std::min(1.0, spec.perturb_scale);
                for (std::size_t c = 0; c < count; ++c) {
                    Solution s = A.centers;
                    for (std::size_t j = 0; j < k; ++j)
                        if (!members[j].empty() && uniform01(eng) < p)
                            s.set_center_index(j, members[j][uniform_index(eng, members[j].size())]);
                    out.push_back({std::move(s), family});
                }
                break;
            }
            const double per_dim = 1.0 / std::sqrt(static_cast<double>(P.dim()));
            const bool median = P.metric() == MetricKind::euclidean;
            const double fallback = n > 0 ? A.total() / static_cast<double>(n) : 0.0;
            for (std::size_t c = 0; c < count; ++c) {
                Solution s = A.centers;
                for (std::size_t j = 0; j < k; ++j) {
                    const double delta = A.delta[j] > 0.0 ? A.delta[j] : fallback;
                    const double radius = median ? delta : std::sqrt(delta);
                    const double sd = spec.perturb_scale * radius * per_dim;
                    for (double& v : s.center(j)) v += sd * standard_normal(eng);
                }
                out.push_back({std::move(s), family});
            }
            break;
        }
        case Family::drop_one_center: {
            if (k < 2) break;
            for (std::size_t j = 0; j < k; ++j) {
                Solution s = A.centers;
                const std::size_t other = (j + 1) % k;
                if (s.indexed()) {
                    s.set_center_index(j, s.center_index(other));
                } else {
                    auto src = A.centers.center(other);
                    std::copy(src.begin(), src.end(), s.center(j).begin());
                }
                out.push_back({std::move(s), family});
            }
            break;
        }
        case Family::adversarial_simplex: {
            if (tag == nullptr || tag->kind != InstanceKind::simplex_lb)
                throw ValidationError("adversarial_simplex candidates need a simplex instance");
            if (tag->dim != P.dim() || tag->k * tag->block_size != n)
                throw ValidationError("simplex tag does not describe this dataset");
            for (std::size_t c = 0; c < count; ++c) out.push_back({simplex_attack(eng, *tag), family});
            break;
        }
        }
    }
    return out;
}

CandidatePool make_pool(const Dataset& P, std::vector<Candidate> candidates) {
    CandidatePool pool;
    pool.costs.resize(candidates.size());
    parallel_for(candidates.size(),
                 [&](std::size_t i) { pool.costs[i] = total_cost(P, candidates[i].centers); });
    pool.candidates = std::move(candidates);
    return pool;
}

namespace {

struct ErrorAccumulator {
    SupError r;
    CompensatedSum sum;

    void add(std::size_t index, Family family, double true_cost, double estimate) {
        if (!(true_cost > 0.0)) {
            r.skipped.push_back(index);
            return;
        }
        const double e = relative_error(true_cost, estimate);
        sum += e;
        if (r.argmax == npos || e > r.max) {
            r.max = e;
            r.argmax = index;
            r.family = family;
        }
        ++r.evaluated;
    }

    SupError finish() {
        r.mean = r.evaluated > 0 ? sum.value() / static_cast<double>(r.evaluated) : 0.0;
        return r;
    }
};

}  // namespace

SupError sup_error(const Dataset& P, const Coreset& omega, const CandidatePool& pool) {
    if (pool.candidates.empty()) throw ValidationError("candidate list is empty");
    if (omega.metric != P.metric()) throw ValidationError("coreset metric does not match dataset");
    ErrorAccumulator acc;
    for (std::size_t i = 0; i < pool.candidates.size(); ++i)
        acc.add(i, pool.candidates[i].family, pool.costs[i],
                estimate_cost(omega, pool.candidates[i].centers, &P));
    return acc.finish();
}

SupError sup_error(const Dataset& P, const Coreset& omega, const std::vector<Candidate>& candidates) {
    return sup_error(P, omega, make_pool(P, candidates));
}

namespace {

/// Index of the single nonzero coordinate of a standard basis vector.
std::size_t basis_index(std::span<const double> p) {
    std::size_t hit = npos;
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t] == 0.0) continue;
        if (std::abs(p[t] - 1.0) > 1e-12 || hit != npos)
            throw ValidationError("coreset entry is not a standard basis point");
        hit = t;
    }
    if (hit == npos) throw ValidationError("coreset entry is not a standard basis point");
    return hit;
}

std::vector<double> normalized_indicator(const std::set<std::size_t>& support, std::size_t dim) {
    std::vector<double> s(dim, 0.0);
    const double v = 1.0 / std::sqrt(static_cast<double>(support.size()));
    for (std::size_t i : support) s[i] = v;
    return s;
}

}  // namespace

std::vector<double> adversarial_center(const Coreset& omega) {
    if (omega.metric == MetricKind::finite_matrix)
        throw ValidationError("adversarial center needs coordinates");
    if (omega.size() == 0) throw ValidationError("adversarial center of an empty coreset");
    std::set<std::size_t> support;
    for (std::size_t e = 0; e < omega.size(); ++e) support.insert(basis_index(omega.entries.point(e)));
    return normalized_indicator(support, omega.entries.dim);
}

Solution adversarial_solution(const Coreset& omega, const InstanceTag& tag) {
    if (tag.kind != InstanceKind::simplex_lb) throw ValidationError("tag is not a simplex instance");
    if (omega.entries.dim != tag.dim) throw ValidationError("coreset does not live in the simplex space");
    std::vector<std::set<std::size_t>> support(tag.k);
    std::vector<double> local(tag.dim);
    for (std::size_t e = 0; e < omega.size(); ++e) {
        auto p = omega.entries.point(e);
        const std::size_t src = omega.entries.sources[e];
        std::size_t b = src != npos ? tag.block_of(src)
                                    : static_cast<std::size_t>(std::llround(
                                          std::max(0.0, p[0] / tag.separation)));
        if (b >= tag.k) throw ValidationError("coreset entry outside the simplex blocks");
        std::copy(p.begin(), p.end(), local.begin());
        local[0] -= static_cast<double>(b) * tag.separation;
        support[b].insert(basis_index(local));
    }
    std::vector<double> flat;
    flat.reserve(tag.k * tag.dim);
    for (std::size_t b = 0; b < tag.k; ++b) {
        std::vector<double> s(tag.dim, 1.0 / static_cast<double>(tag.dim));
        if (!support[b].empty()) s = normalized_indicator(support[b], tag.dim);
        s[0] += static_cast<double>(b) * tag.separation;
        flat.insert(flat.end(), s.begin(), s.end());
    }
    return Solution::from_coords(std::move(flat), tag.dim);
}

std::string_view to_string(BetaMode mode) {
    return mode == BetaMode::exact ? "exact" : "heuristic";
}

BetaMode beta_mode_from_string(std::string_view name) {
    if (name == "exact") return BetaMode::exact;
    if (name == "heuristic") return BetaMode::heuristic;
    throw ValidationError("unknown beta mode '" + std::string(name) + "'");
}

BetaEstimate estimate_beta(const Dataset& P, std::size_t k, BetaMode mode, const SeedConfig& cfg) {
    if (k < 2) throw ValidationError("beta needs k >= 2");
    BetaEstimate b;
    b.mode = mode;
    if (mode == BetaMode::exact) {
        if (P.size() > kBruteForceMaxPoints)
            throw ValidationError("exact beta needs n <= " + std::to_string(kBruteForceMaxPoints));
        b.opt_k = brute_force_opt(P, k).opt;
        b.opt_k_minus_1 = brute_force_opt(P, k - 1).opt;
        b.note = "exact optima by partition enumeration";
    } else {
        b.opt_k = approx_solution(P, k, cfg).total();
        b.opt_k_minus_1 = approx_solution(P, k - 1, cfg).total();
        b.note = "heuristic: both optima are best-of-restarts local optima, error in either direction";
    }
    if (b.opt_k > 0.0) {
        b.beta = b.opt_k_minus_1 / b.opt_k - 1.0;
    } else if (b.opt_k_minus_1 > 0.0) {
        b.beta = std::numeric_limits<double>::infinity();
    } else {
        b.beta = 0.0;
        b.note += "; OPT_k = OPT_{k-1} = 0";
    }
    return b;
}

ErrorTable sweep(const Dataset& P, const ApproxSolution& A, const CandidatePool& pool,
                 const SweepConfig& cfg, const InstanceTag* tag) {
    if (cfg.algorithms.empty() || cfg.m_list.empty() || cfg.trials == 0)
        throw ValidationError("sweep needs algorithms, sizes and at least one trial");
    if (pool.candidates.empty()) throw ValidationError("candidate list is empty");
    if (cfg.adaptive_attack && (tag == nullptr || tag->kind != InstanceKind::simplex_lb))
        throw ValidationError("adaptive simplex attack needs a simplex instance");

    std::optional<SensitivitySampler> sampler;
    if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::sensitivity) !=
        cfg.algorithms.end())
        sampler.emplace(P, A);

    const std::size_t per_alg = cfg.m_list.size() * cfg.trials;
    ErrorTable table(cfg.algorithms.size() * per_alg);
    parallel_for(table.size(), [&](std::size_t cell) {
        const Algorithm alg = cfg.algorithms[cell / per_alg];
        const std::size_t mi = (cell % per_alg) / cfg.trials;
        const std::size_t trial = cell % cfg.trials;
        const std::size_t m = cfg.m_list[mi];
        const std::uint64_t seed = derive_seed(cfg.seed, mi, trial);

        const auto start = std::chrono::steady_clock::now();
        Coreset omega;
        switch (alg) {
        case Algorithm::sensitivity: omega = sampler->draw(m, seed); break;
        case Algorithm::uniform: omega = uniform_sample(P, m, seed); break;
        case Algorithm::offset: omega = offset_coreset(P, A); break;
        }
        SupError err = sup_error(P, omega, pool);
        if (cfg.adaptive_attack) {
            const Solution s = adversarial_solution(omega, *tag);
            ErrorAccumulator acc;
            acc.r = err;
            acc.sum += err.mean * static_cast<double>(err.evaluated);
            acc.add(pool.candidates.size(), Family::adversarial_simplex, total_cost(P, s),
                    estimate_cost(omega, s, &P));
            err = acc.finish();
        }
        const bool evente = check_event_e(P, A, omega, cfg.eps).pass;
        const auto stop = std::chrono::steady_clock::now();

        ErrorRow& row = table[cell];
        row.m = m;
        row.trial = trial;
        row.algorithm = alg;
        row.family = err.family;
        row.sup_rel_error = err.max;
        row.mean_rel_error = err.mean;
        row.evente_pass = evente;
        row.wall_time_s = std::chrono::duration<double>(stop - start).count();
        row.distinct_points = omega.distinct_points();
    });
    return table;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ValidationError("median of an empty list");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

ScalingFit scaling_fit(const ErrorTable& table, Algorithm algorithm) {
    std::map<std::size_t, std::vector<double>> by_m;
    for (const auto& row : table)
        if (row.algorithm == algorithm) by_m[row.m].push_back(row.sup_rel_error);
    if (by_m.size() < 2) throw ValidationError("scaling fit needs at least two coreset sizes");
    ScalingFit fit;
    for (auto& [m, errs] : by_m) {
        fit.m.push_back(static_cast<double>(m));
        fit.median_sup.push_back(median(errs));
    }
    const std::size_t q = fit.m.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        if (!(fit.median_sup[i] > 0.0)) throw ValidationError("scaling fit needs positive errors");
        mx += std::log(fit.m[i]);
        my += std::log(fit.median_sup[i]);
    }
    mx /= static_cast<double>(q);
    my /= static_cast<double>(q);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        const double dx = std::log(fit.m[i]) - mx;
        sxy += dx * (std::log(fit.median_sup[i]) - my);
        sxx += dx * dx;
    }
    fit.slope = sxy / sxx;
    return fit;
}

}  // namespace coreset_lab
