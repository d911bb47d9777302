// coreset_lab command-line driver.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coreset_lab/diagnostics.hpp"
#include "coreset_lab/evaluation.hpp"
#include "coreset_lab/instances.hpp"
#include "coreset_lab/io.hpp"
#include "coreset_lab/sampler.hpp"
#include "coreset_lab/seeding.hpp"

using namespace coreset_lab;

namespace {

std::vector<std::size_t> parse_sizes(const std::string& list) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = list.find(',', pos);
        const std::string item = list.substr(pos, comma - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(item, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != item.size() || item[0] == '-')
                throw ValidationError("cannot parse '" + item + "' as a size");
            out.push_back(static_cast<std::size_t>(v));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ValidationError("empty size list");
    return out;
}

Objective objective_of(const std::string& name) { return objective_from_string(name); }

/// Dataset under the requested objective.
Dataset as_objective(const Dataset& P, Objective objective) {
    if (P.is_finite()) {
        if (objective != Objective::kmeans)
            throw ValidationError("finite-matrix datasets use matrix entries as costs (kmeans mode)");
        return P;
    }
    return P.with_metric(objective == Objective::kmeans ? MetricKind::squared_euclidean
                                                        : MetricKind::euclidean);
}

SeedConfig seed_config(std::uint64_t seed, int restarts) {
    SeedConfig cfg;
    cfg.rng_seed = seed;
    cfg.restarts = restarts;
    return cfg;
}

struct Loaded {
    DatasetFile file;
    Dataset data;
    Coreset coreset;
    CoresetMeta meta;
    ApproxSolution A;
};

/// Dataset and coreset with the reference solution recomputed from the
/// coreset's provenance.
Loaded load_pair(const std::string& dataset, const std::string& coreset) {
    Loaded l{read_dataset(dataset), {}, {}, {}, {}};
    l.coreset = read_coreset(coreset, &l.meta);
    l.data = as_objective(l.file.data, l.meta.objective);
    if (l.coreset.metric != l.data.metric())
        throw ValidationError("coreset metric does not match the dataset");
    if (l.coreset.dataset_digest != 0 && l.coreset.dataset_digest != l.data.digest())
        throw ValidationError("coreset was built from a different dataset");
    if (l.meta.k == 0) throw ValidationError("coreset sidecar lacks k");
    l.A = approx_solution(l.data, l.meta.k,
                          seed_config(l.coreset.seed, l.meta.restarts > 0 ? l.meta.restarts : 5));
    if (l.coreset.approx_digest != 0 && l.coreset.approx_digest != l.A.digest())
        throw ValidationError("recomputed reference solution does not match the coreset");
    return l;
}

Solution read_solution(const std::string& path, const Dataset& P) {
    const Dataset rows = parse_dataset(read_text(path), path);
    if (P.is_finite()) {
        if (rows.dim() != 1) throw ValidationError(path + ": expected one center index per row");
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double v = rows.point(i)[0];
            if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
                throw ValidationError(path + ": center index must be a nonnegative integer");
            ids.push_back(static_cast<std::size_t>(v));
        }
        return Solution::from_indices(std::move(ids));
    }
    return Solution::from_coords(rows.coords(), rows.dim());
}

int run_gen(const std::string& kind, std::size_t k, double eps, std::size_t n_per, std::size_t dim,
            double sigma, double separation, double target_beta, double noise_radius,
            double spread, const std::string& sizes, std::uint64_t seed, const std::string& out) {
    Instance inst;
    const InstanceKind kk = instance_kind_from_string(kind);
    switch (kk) {
    case InstanceKind::stable:
        inst = sizes.empty() ? gen_separated(k, n_per, dim, target_beta, noise_radius, seed)
                             : gen_separated(parse_sizes(sizes), dim, target_beta, noise_radius, seed);
        break;
    case InstanceKind::simplex_lb: inst = gen_simplex_lb(k, eps, separation); break;
    case InstanceKind::blobs:
        inst = sizes.empty() ? gen_blobs(k, n_per, dim, sigma, spread, seed)
                             : gen_blobs(parse_sizes(sizes), dim, sigma, spread, seed);
        break;
    case InstanceKind::finite: throw ValidationError("gen does not produce finite metrics");
    }
    write_dataset(out, inst.first, &inst.second);
    std::cout << "wrote " << inst.first.size() << " points in " << inst.first.dim()
              << " dimensions to " << out << " (digest " << digest_hex(inst.first.digest()) << ")";
    if (inst.second.certified_beta)
        std::cout << ", beta " << format_double(*inst.second.certified_beta) << " ("
                  << inst.second.beta_certificate << ")";
    std::cout << "\n";
    return 0;
}

int run_build(const std::string& algo, const std::string& dataset, std::size_t k, std::size_t m,
              const std::string& objective, std::uint64_t seed, int restarts,
              const std::string& out) {
    const Objective obj = objective_of(objective);
    const Dataset P = as_objective(read_dataset(dataset).data, obj);
    const Algorithm alg = algorithm_from_string(algo);
    const ApproxSolution A = approx_solution(P, k, seed_config(seed, restarts));
    Coreset c;
    switch (alg) {
    case Algorithm::sensitivity: c = sensitivity_sample(P, A, m, seed); break;
    case Algorithm::uniform:
        c = uniform_sample(P, m, seed);
        c.approx_digest = A.digest();
        break;
    case Algorithm::offset: c = offset_coreset(P, A); break;
    }
    c.seed = seed;
    write_coreset(out, c, {obj, k, restarts});
    std::cout << "wrote " << c.size() << " entries (" << c.distinct_points()
              << " distinct) to " << out << ", cost(P,A) = " << format_double(A.total()) << "\n";
    return 0;
}

int run_eval(const std::string& dataset, const std::string& coreset, const std::string& families,
             std::size_t count, std::uint64_t seed, const std::string& report_path) {
    const Loaded l = load_pair(dataset, coreset);
    const auto fams = parse_families(families);
    const InstanceTag* tag = l.file.tag ? &*l.file.tag : nullptr;
    auto candidates = generate_candidates(l.data, l.A, CandidateSpec::uniform(fams, count, seed), tag);
    const bool attack = std::find(fams.begin(), fams.end(), Family::adversarial_simplex) != fams.end();
    if (attack) candidates.push_back({adversarial_solution(l.coreset, *tag), Family::adversarial_simplex});
    const SupError e = sup_error(l.data, l.coreset, candidates);

    json report = make_report(l.data);
    report["coreset_meta"] = coreset_meta_json(l.coreset, l.meta);
    report["errors"] = to_json(e);
    write_report(report_path, report);
    std::cout << "sup relative error " << format_double(e.max) << " ("
              << (e.argmax == npos ? "none" : std::string(to_string(e.family))) << "), mean "
              << format_double(e.mean) << " over " << e.evaluated << " candidates";
    if (!e.skipped.empty()) std::cout << ", " << e.skipped.size() << " zero-cost skipped";
    std::cout << "\n";
    return 0;
}

int run_diag(const std::string& dataset, const std::string& coreset, double eps,
             const std::string& solution, const std::string& report_path) {
    const Loaded l = load_pair(dataset, coreset);
    const Solution S = solution.empty() ? l.A.centers : read_solution(solution, l.data);
    const EventEReport ev = check_event_e(l.data, l.A, l.coreset, eps);
    const auto bounds = check_weight_bounds(l.data, l.A, l.coreset);
    const StructureReport st = classify_structure(l.data, l.A, S, eps);
    const auto [band, type] = st.largest_group();

    json report = make_report(l.data);
    report["coreset_meta"] = coreset_meta_json(l.coreset, l.meta);
    report["evente"] = to_json(ev);
    report["weight_bounds"] = weight_bounds_json(bounds, l.coreset.size());
    report["structure"] = to_json(st);
    if (band >= 0) report["interaction"] = to_json(interaction_profile(l.data, l.A, S, st, band, type));
    write_report(report_path, report);
    std::cout << "event E " << (ev.pass ? "pass" : "fail") << " (P1 " << (ev.p1_pass ? "ok" : "fail")
              << ", P2 " << (ev.p2_pass ? "ok" : "fail") << ", P3 " << (ev.p3_pass ? "ok" : "fail")
              << "), weight-bound violations " << bounds.size() << "\n";
    return 0;
}

int run_sweep(const std::string& dataset, const std::string& algos, const std::string& m_list,
              std::size_t trials, std::size_t k, const std::string& objective,
              const std::string& families, std::size_t count, double eps, int restarts,
              std::uint64_t seed, const std::string& out) {
    const DatasetFile f = read_dataset(dataset);
    const Dataset P = as_objective(f.data, objective_of(objective));
    const InstanceTag* tag = f.tag ? &*f.tag : nullptr;
    const ApproxSolution A = approx_solution(P, k, seed_config(seed, restarts));

    SweepConfig cfg;
    for (const auto& name : CLI::detail::split(algos, ','))
        if (!name.empty()) cfg.algorithms.push_back(algorithm_from_string(name));
    cfg.m_list = parse_sizes(m_list);
    cfg.trials = trials;
    cfg.eps = eps;
    cfg.seed = seed;
    const auto fams = parse_families(families);
    cfg.adaptive_attack =
        std::find(fams.begin(), fams.end(), Family::adversarial_simplex) != fams.end();
    const CandidatePool pool =
        make_pool(P, generate_candidates(P, A, CandidateSpec::uniform(fams, count, seed), tag));
    const ErrorTable table = sweep(P, A, pool, cfg, tag);
    write_error_table(out, table);
    for (Algorithm alg : cfg.algorithms) {
        std::cout << to_string(alg) << ":";
        for (std::size_t m : cfg.m_list) {
            std::vector<double> errs;
            for (const auto& r : table)
                if (r.algorithm == alg && r.m == m) errs.push_back(r.sup_rel_error);
            std::cout << " m=" << m << " median " << format_double(median(errs));
        }
        std::cout << "\n";
    }
    return 0;
}

int run_beta(const std::string& dataset, std::size_t k, const std::string& mode, std::uint64_t seed,
             int restarts) {
    const Dataset P = read_dataset(dataset).data;
    const BetaEstimate b = estimate_beta(P, k, beta_mode_from_string(mode), seed_config(seed, restarts));
    std::cout << to_json(b).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensitivity-sampling coresets for k-means and k-median"};
    app.require_subcommand(1);

    std::string kind = "blobs", sizes, out;
    std::size_t k = 3, n_per = 100, dim = 2;
    double eps = 0.1, sigma = 1.0, separation = kDefaultSimplexSeparation, target_beta = 10.0,
           noise_radius = 1.0, spread = 100.0;
    std::uint64_t seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
    gen->add_option("--kind", kind, "stable|simplex|blobs")->capture_default_str();
    gen->add_option("--k", k)->capture_default_str();
    gen->add_option("--eps", eps)->capture_default_str();
    gen->add_option("--n-per", n_per)->capture_default_str();
    gen->add_option("--dim", dim)->capture_default_str();
    gen->add_option("--sigma", sigma)->capture_default_str();
    gen->add_option("--separation", separation)->capture_default_str();
    gen->add_option("--target-beta", target_beta)->capture_default_str();
    gen->add_option("--noise-radius", noise_radius)->capture_default_str();
    gen->add_option("--spread", spread)->capture_default_str();
    gen->add_option("--sizes", sizes, "comma-separated cluster sizes (overrides --k/--n-per)");
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out", out)->required();

    std::string algo = "sensitivity", dataset, objective = "kmeans";
    std::size_t m = 1000;
    int restarts = 5;
    auto* build = app.add_subcommand("build", "build a coreset");
    build->add_option("--algo", algo, "sensitivity|uniform|offset")->capture_default_str();
    build->add_option("--dataset", dataset)->required();
    build->add_option("--k", k)->capture_default_str();
    build->add_option("--m", m)->capture_default_str();
    build->add_option("--objective", objective, "kmeans|kmedian")->capture_default_str();
    build->add_option("--seed", seed)->capture_default_str();
    build->add_option("--restarts", restarts)->capture_default_str();
    build->add_option("--out", out)->required();

    std::string coreset, families = "random_data_points,lloyd_random_restarts,drop_one_center",
                         report = "out.json";
    std::size_t count = 100;
    auto* eval = app.add_subcommand("eval", "measure coreset error over candidate solutions");
    eval->add_option("--dataset", dataset)->required();
    eval->add_option("--coreset", coreset)->required();
    eval->add_option("--families", families)->capture_default_str();
    eval->add_option("--count", count)->capture_default_str();
    eval->add_option("--seed", seed)->capture_default_str();
    eval->add_option("--report", report)->capture_default_str();

    std::string solution;
    double diag_eps = 0.2;
    auto* diag = app.add_subcommand("diag", "event E, weight bounds and cluster structure");
    diag->add_option("--dataset", dataset)->required();
    diag->add_option("--coreset", coreset)->required();
    diag->add_option("--eps", diag_eps)->capture_default_str();
    diag->add_option("--solution", solution, "CSV of centers (default: the reference solution)");
    diag->add_option("--report", report)->capture_default_str();

    std::string algos = "sensitivity,uniform", m_list = "200,800,3200", table_out = "table.csv";
    std::size_t trials = 50, sweep_k = 5;
    double sweep_eps = 0.2;
    auto* sw = app.add_subcommand("sweep", "error-versus-size table");
    sw->add_option("--dataset", dataset)->required();
    sw->add_option("--algos", algos)->capture_default_str();
    sw->add_option("--m-list", m_list)->capture_default_str();
    sw->add_option("--trials", trials)->capture_default_str();
    sw->add_option("--k", sweep_k)->capture_default_str();
    sw->add_option("--objective", objective)->capture_default_str();
    sw->add_option("--families", families)->capture_default_str();
    sw->add_option("--count", count)->capture_default_str();
    sw->add_option("--eps", sweep_eps)->capture_default_str();
    sw->add_option("--restarts", restarts)->capture_default_str();
    sw->add_option("--seed", seed)->capture_default_str();
    sw->add_option("--out", table_out)->capture_default_str();

    std::string mode = "exact";
    std::size_t beta_k = 2;
    auto* beta = app.add_subcommand("beta", "estimate the stability parameter");
    beta->add_option("--dataset", dataset)->required();
    beta->add_option("--k", beta_k)->capture_default_str();
    beta->add_option("--mode", mode, "exact|heuristic")->capture_default_str();
    beta->add_option("--seed", seed)->capture_default_str();
    beta->add_option("--restarts", restarts)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen)
            return run_gen(kind, k, eps, n_per, dim, sigma, separation, target_beta, noise_radius,
                           spread, sizes, seed, out);
        if (*build) return run_build(algo, dataset, k, m, objective, seed, restarts, out);
        if (*eval) return run_eval(dataset, coreset, families, count, seed, report);
        if (*diag) return run_diag(dataset, coreset, diag_eps, solution, report);
        if (*sw)
            return run_sweep(dataset, algos, m_list, trials, sweep_k, objective, families, count,
                             sweep_eps, restarts, seed, table_out);
        if (*beta) return run_beta(dataset, beta_k, mode, seed, restarts);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
