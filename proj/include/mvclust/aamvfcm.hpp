#pragma once

#include "mvclust/model.hpp"

namespace mvclust {

/// theta = scale * d_h / n, with d_h the current (post-pruning) dimensionality.
double compute_threshold(std::size_t current_dims, std::size_t n, double scale = 1.0);

/// Original view / feature ids backing each position of the working arrays.
struct ActiveLayout {
    std::vector<std::size_t> view_ids;
    std::vector<std::vector<std::size_t>> feature_ids;

    static ActiveLayout from_mask(const ActiveMask& mask);
};

struct FeaturePruneReport {
    std::size_t removed = 0;
    bool guard_triggered = false;
};

/// Zeroes feature weights strictly below the threshold and renormalizes the
/// survivors of each view. If no feature would survive anywhere, the largest
/// weight of the highest-weighted view is retained.
FeaturePruneReport prune_features(ClusterModel& model, ActiveMask& mask, const ActiveLayout& layout, std::size_t n,
                                  double theta_scale = 1.0, std::size_t iteration = 0);

/// Views left without features get weight 0 and are deactivated; surviving
/// view weights are renormalized. Returns the number of views removed.
std::size_t prune_views(ClusterModel& model, ActiveMask& mask, const ActiveLayout& layout, std::size_t iteration = 0);

/// Drops deactivated features and views from the data, delta, centers and
/// weights, and brings `layout` in line with `mask`.
void restructure(const ActiveMask& mask, ActiveLayout& layout, ClusterModel& model, SnrWeights& delta,
                 MultiViewDataset& data);

/// The original dataset restricted to the mask.
MultiViewDataset reduce_dataset(const MultiViewDataset& data, const ActiveMask& mask);

/// The solver with per-iteration feature and view pruning. The result carries
/// the final mask and the reduced dataset.
FitResult fit_aamvfcm(const MultiViewDataset& data, const HyperParams& params);

} // namespace mvclust
