#include "mvclust/snr.hpp"
#include "mvclust/error.hpp"

#include <algorithm>
#include <cmath>

namespace mvclust {

void DeltaClamp::validate() const {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw ConfigError("delta clamp must satisfy 0 < lo <= hi < inf");
}

double feature_mean(const ViewMatrix& view, Eigen::Index j) {
    if (j < 0 || j >= view.cols()) throw ConfigError("feature index " + std::to_string(j) + " out of range");
    return view.col(j).mean();
}

double feature_variance(const ViewMatrix& view, Eigen::Index j) {
    if (view.rows() < 2) throw ConfigError("sample variance needs at least two rows");
    const double mean = feature_mean(view, j);
    return (view.col(j).array() - mean).square().sum() / static_cast<double>(view.rows() - 1);
}

SnrWeights compute_delta(const MultiViewDataset& dataset, const DeltaClamp& clamp) {
    clamp.validate();
    SnrWeights delta;
    delta.reserve(dataset.views.size());
    for (const auto& view : dataset.views) {
        Eigen::VectorXd d(view.cols());
        for (Eigen::Index j = 0; j < view.cols(); ++j) {
            const double var = feature_variance(view, j);
            if (!(var > 0.0)) {
                d(j) = clamp.hi;
                continue;
            }
            const double ratio = feature_mean(view, j) / var;
            d(j) = std::isnan(ratio) ? clamp.lo : std::clamp(ratio, clamp.lo, clamp.hi);
        }
        delta.push_back(std::move(d));
    }
    return delta;
}

} // namespace mvclust
