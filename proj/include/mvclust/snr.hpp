#pragma once

#include "mvclust/dataset.hpp"

#include <vector>

namespace mvclust {

/// Per view, one signal-to-noise regularizer per feature (mean / variance).
using SnrWeights = std::vector<Eigen::VectorXd>;

struct DeltaClamp {
    double lo = 1e-6;
    double hi = 1e6;

    void validate() const;

    bool operator==(const DeltaClamp&) const = default;
};

double feature_mean(const ViewMatrix& view, Eigen::Index j);

/// Unbiased sample variance (n - 1 denominator). Requires n >= 2.
double feature_variance(const ViewMatrix& view, Eigen::Index j);

/// mean / variance per feature, clamped into [lo, hi]. Zero variance maps to
/// `hi`, nonpositive ratios to `lo`.
SnrWeights compute_delta(const MultiViewDataset& dataset, const DeltaClamp& clamp = {});

} // namespace mvclust
