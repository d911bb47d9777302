#pragma once

#include <cstddef>
#include <cstdint>

#include "coreset_lab/core.hpp"
#include "coreset_lab/diagnostics.hpp"
#include "coreset_lab/sampler.hpp"
#include "coreset_lab/seeding.hpp"

namespace coreset_lab {

/// Cost convention of a pipeline run: squared distances for k-means, plain
/// distances for k-median.
struct ObjectiveMode {
    Objective objective = Objective::kmeans;
    int exponent = 2;
    int seeding_power = 2;
    MetricKind metric = MetricKind::squared_euclidean;

    static ObjectiveMode kmeans();
    static ObjectiveMode kmedian();
    static ObjectiveMode from(Objective objective);

    /// Throws unless exponent, seeding power and metric agree with the objective.
    void validate() const;
};

struct PipelineResult {
    ApproxSolution approx;
    Coreset coreset;
    EventEReport evente;
};

/// approx_solution -> sensitivity sampling -> event E under the selected
/// cost. A coordinate dataset is reinterpreted under the mode's metric;
/// finite metrics run only in k-means mode.
PipelineResult run_pipeline(const Dataset& P, std::size_t k, std::size_t m,
                            const ObjectiveMode& mode, const SeedConfig& cfg, double eps,
                            std::uint64_t seed);

}  // namespace coreset_lab
