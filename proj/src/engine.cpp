#include "engine.hpp"
#include "mvclust/aamvfcm.hpp"
#include "mvclust/amvfcm.hpp"
#include "mvclust/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace mvclust::detail {

FitResult run_solver(const MultiViewDataset& input, const HyperParams& params, bool pruning) {
    validate(input);
    params.validate();
    const std::size_t n = input.num_samples();
    if (n < params.clusters)
        throw ConfigError("n=" + std::to_string(n) + " is smaller than the cluster count " +
                          std::to_string(params.clusters));
    if (n < 2) throw ConfigError("need at least two samples");

    FitResult result;
    result.warnings = params.warnings(n, input.dims());
    result.mask = ActiveMask::all(input.dims());

    MultiViewDataset data;
    data.views = input.views;
    data.view_names = input.view_names;
    ActiveLayout layout = ActiveLayout::from_mask(result.mask);

    SnrWeights delta = compute_delta(data, params.delta_clamp);
    ClusterModel model = initial_model(data, delta, params.clusters, params.seed);
    result.objective_trace.push_back(objective(model, delta, data, params.beta, params.eta));
    result.pruning_events.push_back(false);

    using clock = std::chrono::steady_clock;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= params.max_iters; ++t) {
        const auto start = clock::now();

        model.memberships = update_membership(model, delta, data);
        model.centers = update_centers(model, delta, data);
        model.feature_weights = update_feature_weights(model, delta, data, params.eta);

        bool pruned = false;
        if (pruning && t > params.prune_warmup) {
            const auto features = prune_features(model, result.mask, layout, n, params.theta_scale, t);
            if (features.guard_triggered)
                result.warnings.push_back("iteration " + std::to_string(t) +
                                          ": every feature fell below its threshold; kept the strongest one");
            const auto views = prune_views(model, result.mask, layout, t);
            if (features.removed > 0 || views > 0) {
                restructure(result.mask, layout, model, delta, data);
                pruned = true;
            }
        }

        model.view_weights = update_view_weights(model, delta, data, params.beta);
        const double current = objective(model, delta, data, params.beta, params.eta);
        result.iteration_seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
        result.objective_trace.push_back(current);
        result.pruning_events.push_back(pruned);
        result.iterations = t;

        if (!std::isfinite(current))
            throw Error(ErrorCategory::Numeric, "objective became non-finite at iteration " + std::to_string(t));
        if (!pruned && std::abs(current - previous) <= params.epsilon) {
            result.converged = true;
            break;
        }
        previous = current;
    }

    result.hard_labels = hard_labels(model.memberships);
    result.model = std::move(model);
    result.delta = std::move(delta);
    if (pruning) result.reduced = reduce_dataset(input, result.mask);
    return result;
}

} // namespace mvclust::detail
