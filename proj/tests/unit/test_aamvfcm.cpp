#include "helpers.hpp"

#include "mvclust/aamvfcm.hpp"
#include "mvclust/amvfcm.hpp"
#include "mvclust/rng.hpp"
#include "mvclust/synthgen.hpp"

#include <cmath>

using namespace mvclust;

namespace {

ClusterModel weights_only(const std::vector<Eigen::VectorXd>& w, const Eigen::VectorXd& v) {
    ClusterModel m;
    m.memberships = Eigen::MatrixXd::Constant(1, 2, 0.5);
    for (const auto& wh : w) m.centers.push_back(Eigen::MatrixXd::Zero(2, wh.size()));
    m.feature_weights = w;
    m.view_weights = v;
    return m;
}

bool is_subset(const ActiveMask& later, const ActiveMask& earlier) {
    for (std::size_t h = 0; h < later.views.size(); ++h) {
        if (later.views[h] && !earlier.views[h]) return false;
        for (std::size_t j = 0; j < later.features[h].size(); ++j)
            if (later.features[h][j] && !earlier.features[h][j]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("threshold") {
    CHECK(compute_threshold(3, 15000) == doctest::Approx(0.0002).epsilon(1e-15));
    CHECK(compute_threshold(40, 40) == 1.0);
    CHECK(compute_threshold(1, 800) == 1.0 / 800);
    CHECK(compute_threshold(2, 100, 3.0) == doctest::Approx(0.06));
}

TEST_CASE("feature pruning") {
    SUBCASE("below-threshold weight removed and survivors renormalized") {
        auto model = weights_only({Eigen::Vector3d(0.5, 0.3, 0.2)}, Eigen::VectorXd::Ones(1));
        auto mask = ActiveMask::all({3});
        const auto layout = ActiveLayout::from_mask(mask);
        // theta = 3 / 12 = 0.25
        const auto report = prune_features(model, mask, layout, 12, 1.0, 4);
        CHECK(report.removed == 1);
        CHECK_FALSE(report.guard_triggered);
        CHECK(model.feature_weights[0](0) == doctest::Approx(0.625));
        CHECK(model.feature_weights[0](1) == doctest::Approx(0.375));
        CHECK(model.feature_weights[0](2) == 0.0);
        CHECK(mask.active_features(0) == std::vector<std::size_t>{0, 1});
        REQUIRE(mask.history.size() == 1);
        CHECK(mask.history[0].iteration == 4);
        CHECK(mask.history[0].feature == std::optional<std::size_t>(2));
    }
    SUBCASE("weights at or above threshold are untouched") {
        const Eigen::Vector3d w(0.5, 0.25, 0.25);
        auto model = weights_only({w}, Eigen::VectorXd::Ones(1));
        auto mask = ActiveMask::all({3});
        const auto report = prune_features(model, mask, ActiveLayout::from_mask(mask), 12);
        CHECK(report.removed == 0);
        CHECK(model.feature_weights[0] == w);
    }
    SUBCASE("guard keeps the strongest feature when nothing survives") {
        auto model = weights_only({Eigen::Vector2d(0.6, 0.4), Eigen::Vector2d(0.3, 0.7)}, Eigen::Vector2d(0.2, 0.8));
        auto mask = ActiveMask::all({2, 2});
        const auto layout = ActiveLayout::from_mask(mask);
        const auto report = prune_features(model, mask, layout, 2);
        CHECK(report.guard_triggered);
        CHECK(mask.active_features(0).empty());
        CHECK(mask.active_features(1) == std::vector<std::size_t>{1});
        CHECK(model.feature_weights[1](1) == 1.0);
        CHECK(prune_views(model, mask, layout) == 1);
        CHECK(mask.active_view_count() == 1);
    }
}

TEST_CASE("view pruning") {
    SUBCASE("weights renormalize over survivors") {
        auto model = weights_only({Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)},
                                  Eigen::Vector3d(0.2, 0.3, 0.5));
        auto mask = ActiveMask::all({1, 1, 1});
        const auto layout = ActiveLayout::from_mask(mask);
        mask.features[1][0] = false;
        CHECK(prune_views(model, mask, layout, 2) == 1);
        CHECK(model.view_weights(0) == doctest::Approx(0.2 / 0.7));
        CHECK(model.view_weights(1) == 0.0);
        CHECK(model.view_weights(2) == doctest::Approx(0.5 / 0.7));
        CHECK(mask.active_views() == std::vector<std::size_t>{0, 2});
        CHECK_FALSE(mask.history.back().feature.has_value());
    }
    SUBCASE("a view already at zero weight") {
        auto model = weights_only({Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)},
                                  Eigen::Vector3d(0.4, 0.0, 0.6));
        auto mask = ActiveMask::all({1, 1, 1});
        const auto layout = ActiveLayout::from_mask(mask);
        mask.features[1][0] = false;
        prune_views(model, mask, layout);
        CHECK(model.view_weights(0) == doctest::Approx(0.4));
        CHECK(model.view_weights(2) == doctest::Approx(0.6));
    }
    SUBCASE("nothing to remove") {
        const Eigen::Vector2d v(0.3, 0.7);
        auto model = weights_only({Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)}, v);
        auto mask = ActiveMask::all({1, 1});
        CHECK(prune_views(model, mask, ActiveLayout::from_mask(mask)) == 0);
        CHECK(model.view_weights == v);
        CHECK(mask.active_view_count() == 2);
    }
}

TEST_CASE("restructure drops pruned columns and views") {
    MultiViewDataset data;
    data.views.push_back((ViewMatrix(2, 3) << 1, 2, 3, 4, 5, 6).finished());
    data.views.push_back((ViewMatrix(2, 1) << 7, 8).finished());
    ClusterModel model = weights_only({Eigen::Vector3d(0.5, 0, 0.5), Eigen::VectorXd::Ones(1)}, Eigen::Vector2d(1, 0));
    model.centers[0] << 10, 11, 12, 13, 14, 15;
    SnrWeights delta{Eigen::Vector3d(1, 2, 3), Eigen::VectorXd::Constant(1, 4)};
    auto mask = ActiveMask::all({3, 1});
    auto layout = ActiveLayout::from_mask(mask);
    mask.features[0][1] = false;
    mask.features[1][0] = false;
    mask.views[1] = false;

    restructure(mask, layout, model, delta, data);
    REQUIRE(data.num_views() == 1);
    CHECK(data.views[0] == (ViewMatrix(2, 2) << 1, 3, 4, 6).finished());
    CHECK(model.centers[0] == (Eigen::MatrixXd(2, 2) << 10, 12, 13, 15).finished());
    CHECK(delta[0] == Eigen::Vector2d(1, 3));
    CHECK(model.view_weights.size() == 1);
    CHECK(layout.view_ids == std::vector<std::size_t>{0});
    CHECK(layout.feature_ids[0] == std::vector<std::size_t>{0, 2});
    CHECK(mask.final_dims() == std::vector<std::size_t>{2, 0});
    CHECK(mask.reduction_percent() == doctest::Approx(50.0));
}

TEST_CASE("no pruning means identical behaviour to the plain solver") {
    auto data = minmax_normalize(generate(default_paper_spec(300, 4))).first;
    HyperParams p;
    p.clusters = 5;
    p.seed = 2;
    p.eta = 50.0;
    p.beta = BetaMode::fixed(100.0);
    p.theta_scale = 1e-3;
    const auto plain = fit_amvfcm(data, p);
    const auto pruned = fit_aamvfcm(data, p);
    CHECK(pruned.mask.history.empty());
    CHECK(plain.objective_trace == pruned.objective_trace);
    CHECK(plain.hard_labels == pruned.hard_labels);
    REQUIRE(pruned.reduced);
    CHECK(pruned.reduced->views[0] == data.views[0]);
}

TEST_CASE("a view made of near-constant noise is eliminated") {
    // 25 columns against n = 400 puts the threshold (0.0625) above the uniform weight (0.04)
    auto data = minmax_normalize(generate(default_paper_spec(400, 6))).first;
    Rng rng(17);
    ViewMatrix noise(400, 25);
    for (Eigen::Index i = 0; i < noise.rows(); ++i)
        for (Eigen::Index j = 0; j < noise.cols(); ++j) noise(i, j) = 0.5 + 1e-4 * rng.uniform();
    data.views.push_back(noise);

    HyperParams p;
    p.clusters = 5;
    const auto fit = fit_aamvfcm(data, p);
    CHECK_FALSE(fit.mask.views[2]);
    CHECK(fit.mask.final_dims()[2] == 0);
    CHECK(fit.mask.active_view_count() <= 2);
    REQUIRE(fit.reduced);
    CHECK(fit.reduced->num_views() == fit.mask.active_view_count());
}

TEST_CASE("pruning properties on random instances") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 20; ++rep) {
        auto data = testing::random_dataset(gen, 80, 1 + rep % 3, 6);
        HyperParams p;
        p.clusters = 2 + rep % 3;
        p.seed = static_cast<std::uint64_t>(rep);
        p.theta_scale = 5.0 + rep;
        const auto fit = fit_aamvfcm(data, p);

        CHECK(fit.mask.active_view_count() >= 1);
        std::size_t active = 0, original = data.total_dims();
        for (auto d : fit.mask.final_dims()) active += d;
        CHECK(active >= 1);
        CHECK(fit.mask.reduction_percent() == doctest::Approx(100.0 * (1.0 - double(active) / double(original))));
        for (const auto& w : fit.model.feature_weights) CHECK(std::abs(w.sum() - 1.0) <= 1e-9);
        CHECK(std::abs(fit.model.view_weights.sum() - 1.0) <= 1e-9);

        // removal history is ordered and replaying it only ever shrinks the mask
        auto replay = ActiveMask::all(data.dims());
        std::size_t last = 0;
        for (const auto& r : fit.mask.history) {
            CHECK(r.iteration >= last);
            last = r.iteration;
            const auto before = replay;
            if (r.feature) replay.features[r.view][*r.feature] = false;
            else replay.views[r.view] = false;
            CHECK(is_subset(replay, before));
        }
        CHECK(replay.features == fit.mask.features);
        CHECK(replay.views == fit.mask.views);

        // descent holds between pruning events
        for (std::size_t t = 1; t < fit.objective_trace.size(); ++t) {
            if (fit.pruning_events[t]) continue;
            const double prev = fit.objective_trace[t - 1];
            CHECK(fit.objective_trace[t] <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
        }
    }
}
