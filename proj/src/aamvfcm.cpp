#include "mvclust/aamvfcm.hpp"
#include "mvclust/error.hpp"
#include "engine.hpp"

namespace mvclust {

double compute_threshold(std::size_t current_dims, std::size_t n, double scale) {
    if (n < 1) throw ConfigError("threshold needs n >= 1");
    return scale * static_cast<double>(current_dims) / static_cast<double>(n);
}

ActiveLayout ActiveLayout::from_mask(const ActiveMask& mask) {
    ActiveLayout layout;
    layout.view_ids = mask.active_views();
    for (auto h : layout.view_ids) layout.feature_ids.push_back(mask.active_features(h));
    return layout;
}

FeaturePruneReport prune_features(ClusterModel& model, ActiveMask& mask, const ActiveLayout& layout, std::size_t n,
                                  double theta_scale, std::size_t iteration) {
    FeaturePruneReport report;
    const std::size_t s = model.feature_weights.size();
    std::vector<std::vector<bool>> keep(s);
    bool any_survivor = false;
    for (std::size_t q = 0; q < s; ++q) {
        const auto& w = model.feature_weights[q];
        const double theta = compute_threshold(static_cast<std::size_t>(w.size()), n, theta_scale);
        keep[q].resize(static_cast<std::size_t>(w.size()));
        for (Eigen::Index j = 0; j < w.size(); ++j) {
            keep[q][static_cast<std::size_t>(j)] = !(w(j) < theta);
            any_survivor = any_survivor || keep[q][static_cast<std::size_t>(j)];
        }
    }
    if (!any_survivor && s > 0) {
        Eigen::Index q = 0;
        model.view_weights.maxCoeff(&q);
        Eigen::Index j = 0;
        model.feature_weights[static_cast<std::size_t>(q)].maxCoeff(&j);
        keep[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] = true;
        report.guard_triggered = true;
    }

    for (std::size_t q = 0; q < s; ++q) {
        auto& w = model.feature_weights[q];
        double survivors = 0.0;
        std::size_t dropped = 0;
        for (Eigen::Index j = 0; j < w.size(); ++j) {
            if (keep[q][static_cast<std::size_t>(j)]) {
                survivors += w(j);
                continue;
            }
            w(j) = 0.0;
            const auto view = layout.view_ids[q];
            const auto feature = layout.feature_ids[q][static_cast<std::size_t>(j)];
            mask.features[view][feature] = false;
            mask.history.push_back({iteration, view, feature});
            ++report.removed;
            ++dropped;
        }
        if (dropped > 0 && survivors > 0.0) w /= survivors;
    }
    return report;
}

std::size_t prune_views(ClusterModel& model, ActiveMask& mask, const ActiveLayout& layout, std::size_t iteration) {
    std::size_t removed = 0;
    for (std::size_t q = 0; q < model.feature_weights.size(); ++q) {
        const auto view = layout.view_ids[q];
        if (!mask.active_features(view).empty()) continue;
        model.view_weights(static_cast<Eigen::Index>(q)) = 0.0;
        mask.views[view] = false;
        mask.history.push_back({iteration, view, std::nullopt});
        ++removed;
    }
    if (removed > 0) {
        const double total = model.view_weights.sum();
        if (total > 0.0) {
            model.view_weights /= total;
        } else {
            // every survivor carried zero weight; fall back to uniform
            for (std::size_t q = 0; q < model.feature_weights.size(); ++q)
                if (mask.views[layout.view_ids[q]]) model.view_weights(static_cast<Eigen::Index>(q)) = 1.0;
            model.view_weights /= model.view_weights.sum();
        }
    }
    return removed;
}

void restructure(const ActiveMask& mask, ActiveLayout& layout, ClusterModel& model, SnrWeights& delta,
                 MultiViewDataset& data) {
    ActiveLayout next;
    std::vector<Eigen::MatrixXd> centers;
    std::vector<Eigen::VectorXd> weights;
    SnrWeights next_delta;
    std::vector<ViewMatrix> views;
    std::vector<std::string> names;
    std::vector<double> view_weights;

    for (std::size_t q = 0; q < layout.view_ids.size(); ++q) {
        const auto view = layout.view_ids[q];
        if (!mask.views[view]) continue;
        std::vector<Eigen::Index> cols;
        std::vector<std::size_t> ids;
        for (std::size_t j = 0; j < layout.feature_ids[q].size(); ++j)
            if (mask.features[view][layout.feature_ids[q][j]]) {
                cols.push_back(static_cast<Eigen::Index>(j));
                ids.push_back(layout.feature_ids[q][j]);
            }
        const auto d = static_cast<Eigen::Index>(cols.size());
        const auto& x = data.views[q];
        ViewMatrix xs(x.rows(), d);
        Eigen::MatrixXd as(model.centers[q].rows(), d);
        Eigen::VectorXd ws(d), ds(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            xs.col(j) = x.col(cols[static_cast<std::size_t>(j)]);
            as.col(j) = model.centers[q].col(cols[static_cast<std::size_t>(j)]);
            ws(j) = model.feature_weights[q](cols[static_cast<std::size_t>(j)]);
            ds(j) = delta[q](cols[static_cast<std::size_t>(j)]);
        }
        views.push_back(std::move(xs));
        centers.push_back(std::move(as));
        weights.push_back(std::move(ws));
        next_delta.push_back(std::move(ds));
        view_weights.push_back(model.view_weights(static_cast<Eigen::Index>(q)));
        if (!data.view_names.empty()) names.push_back(data.view_names[q]);
        next.view_ids.push_back(view);
        next.feature_ids.push_back(std::move(ids));
    }

    data.views = std::move(views);
    data.view_names = std::move(names);
    model.centers = std::move(centers);
    model.feature_weights = std::move(weights);
    model.view_weights = Eigen::Map<Eigen::VectorXd>(view_weights.data(), static_cast<Eigen::Index>(view_weights.size()));
    delta = std::move(next_delta);
    layout = std::move(next);
}

MultiViewDataset reduce_dataset(const MultiViewDataset& data, const ActiveMask& mask) {
    const auto layout = ActiveLayout::from_mask(mask);
    return select_columns(data, layout.view_ids, layout.feature_ids);
}

FitResult fit_aamvfcm(const MultiViewDataset& data, const HyperParams& params) {
    return detail::run_solver(data, params, /*pruning=*/true);
}

} // namespace mvclust
