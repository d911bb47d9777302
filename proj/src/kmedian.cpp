#include "coreset_lab/kmedian.hpp"

#include "coreset_lab/random.hpp"

namespace coreset_lab {

ObjectiveMode ObjectiveMode::kmeans() { return {}; }

ObjectiveMode ObjectiveMode::kmedian() {
    return {Objective::kmedian, 1, 1, MetricKind::euclidean};
}

ObjectiveMode ObjectiveMode::from(Objective objective) {
    return objective == Objective::kmeans ? kmeans() : kmedian();
}

void ObjectiveMode::validate() const {
    const int want = objective == Objective::kmeans ? 2 : 1;
    if (exponent != want) throw ValidationError("cost exponent does not match the objective");
    if (seeding_power != want) throw ValidationError("seeding power does not match the objective");
    if (objective_for(metric) != objective)
        throw ValidationError("metric " + std::string(to_string(metric)) + " does not give the " +
                              std::string(to_string(objective)) + " objective");
}

PipelineResult run_pipeline(const Dataset& P, std::size_t k, std::size_t m,
                            const ObjectiveMode& mode, const SeedConfig& cfg, double eps,
                            std::uint64_t seed) {
    mode.validate();
    if (P.is_finite() && mode.metric != MetricKind::finite_matrix)
        throw ValidationError("finite-matrix data has no coordinates to reinterpret");
    if (!P.is_finite() && mode.metric == MetricKind::finite_matrix)
        throw ValidationError("coordinate data cannot run in finite-matrix mode");
    Dataset converted;
    const Dataset* data = &P;
    if (P.metric() != mode.metric) {
        converted = P.with_metric(mode.metric);
        data = &converted;
    }
    PipelineResult r;
    r.approx = approx_solution(*data, k, cfg);
    r.coreset = sensitivity_sample(*data, r.approx, m, derive_seed(seed, 0x5a3bULL));
    r.evente = check_event_e(*data, r.approx, r.coreset, eps);
    return r;
}

}  // namespace coreset_lab
