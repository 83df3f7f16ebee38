#include "helpers.hpp"

#include "mvclust/amvfcm.hpp"
#include "mvclust/metrics.hpp"
#include "mvclust/synthgen.hpp"

#include <cmath>
#include <set>

using namespace mvclust;

namespace {

MultiViewDataset one_view(const ViewMatrix& x) {
    MultiViewDataset data;
    data.views.push_back(x);
    return data;
}

ClusterModel uniform_model(const MultiViewDataset& data, std::size_t c) {
    ClusterModel m;
    const auto n = static_cast<Eigen::Index>(data.num_samples());
    m.memberships = Eigen::MatrixXd::Constant(n, static_cast<Eigen::Index>(c), 1.0 / double(c));
    for (const auto& x : data.views) {
        m.centers.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c), x.cols()));
        m.feature_weights.push_back(Eigen::VectorXd::Constant(x.cols(), 1.0 / double(x.cols())));
    }
    m.view_weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(data.num_views()), 1.0 / double(data.num_views()));
    return m;
}

SnrWeights unit_delta(const MultiViewDataset& data) {
    SnrWeights d;
    for (const auto& x : data.views) d.push_back(Eigen::VectorXd::Ones(x.cols()));
    return d;
}

void check_simplex(const Eigen::VectorXd& v) {
    CHECK(std::abs(v.sum() - 1.0) <= 1e-9);
    CHECK(v.minCoeff() >= 0.0);
    CHECK(v.maxCoeff() <= 1.0);
}

MultiViewDataset normalized_synthetic(std::size_t n, double sigma2, std::uint64_t seed) {
    auto spec = default_paper_spec(n, seed);
    spec.covariance_scale = sigma2;
    return minmax_normalize(generate(spec)).first;
}

} // namespace

TEST_CASE("weighted distance") {
    auto data = one_view((ViewMatrix(1, 2) << 3, 9).finished());
    auto model = uniform_model(data, 1);
    SnrWeights delta{Eigen::Vector2d(2, 5)};

    SUBCASE("coincident point and center") {
        model.centers[0] << 3, 9;
        CHECK(weighted_distance(model, delta, data, 0, 0, 0) == 0.0);
    }
    SUBCASE("zero weight masks a feature") {
        model.feature_weights[0] << 1, 0;
        CHECK(weighted_distance(model, delta, data, 0, 0, 0) == 18.0);
    }
    SUBCASE("uniform weights and unit delta give mean squared difference") {
        CHECK(weighted_distance(model, unit_delta(data), data, 0, 0, 0) == doctest::Approx((9.0 + 81.0) / 2));
    }
}

TEST_CASE("membership update") {
    SUBCASE("equal distances give uniform rows") {
        const auto u = memberships_from_distances(Eigen::MatrixXd::Constant(3, 4, 2.5));
        CHECK((u.array() - 0.25).abs().maxCoeff() <= 1e-15);
    }
    SUBCASE("distances 0 and ln 3") {
        Eigen::MatrixXd d(1, 2);
        d << 0, std::log(3.0);
        const auto u = memberships_from_distances(d);
        CHECK(u(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(u(0, 1) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("shift invariance and huge distances") {
        Eigen::MatrixXd d(2, 3);
        d << 0.1, 2.0, 0.7, 5, 1, 3;
        const auto u = memberships_from_distances(d);
        const auto shifted = memberships_from_distances((d.array() + 1e4).matrix());
        CHECK((u - shifted).cwiseAbs().maxCoeff() <= 1e-12);
        const auto big = memberships_from_distances((d * 1e6).eval());
        CHECK(big.allFinite());
        CHECK(big(0, 0) == 1.0);
    }
}

TEST_CASE("center update") {
    const auto data = one_view((ViewMatrix(3, 1) << 0, 3, 6).finished());
    auto model = uniform_model(data, 2);
    const auto delta = unit_delta(data);

    SUBCASE("one-hot memberships") {
        model.memberships << 1, 0, 1, 0, 0, 1;
        const auto a = update_centers(model, delta, data);
        CHECK(a[0](0, 0) == 1.5);
        CHECK(a[0](1, 0) == 6.0);
    }
    SUBCASE("uniform memberships give the global mean") {
        const auto a = update_centers(model, delta, data);
        CHECK(a[0](0, 0) == doctest::Approx(3.0));
        CHECK(a[0](1, 0) == doctest::Approx(3.0));
    }
    SUBCASE("an empty cluster is reseeded on a data point") {
        model.memberships << 1, 0, 1, 0, 1, 0;
        model.centers[0] << 3, 3;
        const auto a = update_centers(model, delta, data);
        CHECK(a[0](0, 0) == doctest::Approx(3.0));
        const double reseeded = a[0](1, 0);
        CHECK((reseeded == 0.0 || reseeded == 6.0));
    }
}

TEST_CASE("feature weight update") {
    SUBCASE("cost gap of ln 4 gives 0.8 / 0.2") {
        const auto data = one_view((ViewMatrix(1, 2) << 0, std::sqrt(std::log(4.0))).finished());
        auto model = uniform_model(data, 1);
        model.memberships.setOnes();
        model.view_weights << 1.0;
        const auto w = update_feature_weights(model, unit_delta(data), data, 1.0);
        CHECK(w[0](0) == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(w[0](1) == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("identical features give uniform weights") {
        ViewMatrix x(4, 3);
        for (int i = 0; i < 4; ++i) x.row(i).setConstant(double(i));
        const auto data = one_view(x);
        auto model = uniform_model(data, 2);
        model.centers[0].row(1).setConstant(2.0);
        const auto w = update_feature_weights(model, compute_delta(data), data, 0.3);
        CHECK((w[0].array() - 1.0 / 3).abs().maxCoeff() <= 1e-12);
    }
    SUBCASE("large eta tends to inverse delta") {
        const auto data = one_view((ViewMatrix(2, 2) << 0, 1, 1, 0).finished());
        auto model = uniform_model(data, 2);
        SnrWeights delta{Eigen::Vector2d(1, 3)};
        const auto w = update_feature_weights(model, delta, data, 1e12);
        CHECK(w[0](0) == doctest::Approx(0.75).epsilon(1e-9));
        CHECK(w[0](1) == doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("eta must be positive") {
        const auto data = one_view((ViewMatrix(2, 1) << 0, 1).finished());
        CHECK_THROWS(update_feature_weights(uniform_model(data, 2), unit_delta(data), data, 0.0));
    }
}

TEST_CASE("view weight solve") {
    const double beta = 0.7;
    SUBCASE("equal costs") {
        const auto v = solve_view_weights(Eigen::Vector2d(3, 3), Eigen::Vector2d(beta, beta));
        CHECK(v(0) == doctest::Approx(0.5));
        CHECK(v(1) == doctest::Approx(0.5));
    }
    SUBCASE("cost gap of beta ln 9") {
        const auto v = solve_view_weights(Eigen::Vector2d(0, beta * std::log(9.0)), Eigen::Vector2d(beta, beta));
        CHECK(v(0) == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(v(1) == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("single view") {
        const auto v = solve_view_weights(Eigen::VectorXd::Constant(1, 12.0), Eigen::VectorXd::Constant(1, beta));
        CHECK(v(0) == 1.0);
    }
    SUBCASE("unequal temperatures reach the constrained minimum") {
        Eigen::Vector3d f(1.0, 0.4, 2.0), b(0.3, 1.1, 0.05);
        const auto v = solve_view_weights(f, b);
        check_simplex(v);
        auto value = [&](const Eigen::Vector3d& x) {
            double s = 0;
            for (int h = 0; h < 3; ++h) s += x(h) * f(h) + (x(h) > 0 ? b(h) * x(h) * std::log(x(h)) : 0.0);
            return s;
        };
        const double best = value(v);
        std::mt19937_64 gen(1);
        std::uniform_real_distribution<double> step(-1e-3, 1e-3);
        for (int rep = 0; rep < 200; ++rep) {
            Eigen::Vector3d p = v;
            const double e = step(gen);
            p(rep % 3) += e;
            p((rep + 1) % 3) -= e;
            if (p.minCoeff() < 0) continue;
            CHECK(value(p) >= best - 1e-12);
        }
    }
    SUBCASE("zero temperature picks the cheapest view") {
        const auto v = solve_view_weights(Eigen::Vector3d(2, 1, 3), Eigen::Vector3d::Zero());
        CHECK(v == Eigen::Vector3d(0, 1, 0));
    }
}

TEST_CASE("objective terms") {
    const auto data = one_view((ViewMatrix(4, 1) << 1, 2, 3, 4).finished());
    auto model = uniform_model(data, 2);
    model.centers[0] << 1.5, 3.5;
    const auto delta = unit_delta(data);

    const auto terms = objective_terms(model, delta, data, Eigen::VectorXd::Constant(1, 0.25), 0.1);
    CHECK(terms.membership_entropy == doctest::Approx(4 * std::log(0.5)));
    CHECK(terms.view_entropy == 0.0);
    CHECK(terms.feature_entropy == 0.0);
    // squared gaps to 1.5 and to 3.5 each sum to 9, weighted by 1/2
    CHECK(terms.distortion == doctest::Approx(9.0));
    CHECK(terms.total() == doctest::Approx(terms.distortion + terms.membership_entropy));

    SUBCASE("zero temperatures drop both weight entropies") {
        auto two = data;
        two.views.push_back((ViewMatrix(4, 2) << 1, 0, 0, 1, 1, 1, 0, 0).finished());
        auto m = uniform_model(two, 2);
        const auto t = objective_terms(m, unit_delta(two), two, Eigen::Vector2d::Zero(), 0.0);
        CHECK(t.view_entropy == 0.0);
        CHECK(t.feature_entropy == 0.0);
        CHECK(t.total() == doctest::Approx(t.distortion + t.membership_entropy));
    }
}

TEST_CASE("k-means++ seeding") {
    ViewMatrix x(6, 2);
    x << 0, 0, 1, 0, 0, 1, 5, 5, 6, 5, 9, 9;
    const auto data = one_view(x);

    SUBCASE("c = n picks every point once") {
        const auto a = init_centers(data, 6, 4);
        std::set<std::pair<double, double>> seen;
        for (int k = 0; k < 6; ++k) seen.insert({a[0](k, 0), a[0](k, 1)});
        CHECK(seen.size() == 6);
    }
    SUBCASE("deterministic in the seed") {
        CHECK(init_centers(data, 3, 8)[0] == init_centers(data, 3, 8)[0]);
    }
    SUBCASE("single center is a data point") {
        const auto a = init_centers(data, 1, 2);
        bool found = false;
        for (int i = 0; i < 6; ++i) found |= (a[0].row(0) == x.row(i));
        CHECK(found);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS(init_centers(data, 7, 0));
    }
}

TEST_CASE("hard labels break ties toward the lowest index") {
    Eigen::MatrixXd u(3, 3);
    u << 0.2, 0.4, 0.4, 0.5, 0.25, 0.25, 0.1, 0.1, 0.8;
    CHECK(hard_labels(u) == std::vector<int>{1, 0, 2});
}

TEST_CASE("fit on separated points recovers the partition") {
    // five well-separated locations on one feature; every block is then trivially informative
    MultiViewDataset data;
    ViewMatrix x(100, 1);
    std::vector<int> truth(100);
    for (int i = 0; i < 100; ++i) {
        truth[i] = i % 5;
        x(i, 0) = 10.0 * (i % 5) + 1.0;
    }
    data.views.push_back(x);
    HyperParams p;
    p.clusters = 5;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        p.seed = seed;
        const auto fit = fit_amvfcm(data, p);
        CHECK(adjusted_rand(ContingencyTable::build(truth, fit.hard_labels)) == 1.0);
    }
}

TEST_CASE("fit loop contract") {
    const auto data = normalized_synthetic(150, 0.5, 1);
    HyperParams p;
    p.clusters = 5;
    p.max_iters = 1;
    const auto one = fit_amvfcm(data, p);
    CHECK(one.iterations == 1);
    CHECK(one.objective_trace.size() == 2);
    CHECK_FALSE(one.converged);

    p.max_iters = 100;
    const auto full = fit_amvfcm(data, p);
    const auto again = fit_amvfcm(data, p);
    CHECK(full.objective_trace == again.objective_trace);
    CHECK(full.hard_labels == again.hard_labels);
    CHECK(full.objective_trace.size() == full.iterations + 1);
    CHECK(full.iteration_seconds.size() == full.iterations);
    for (std::size_t i = 0; i < full.model.memberships.rows(); ++i)
        check_simplex(full.model.memberships.row(static_cast<Eigen::Index>(i)).transpose());
    for (const auto& w : full.model.feature_weights) check_simplex(w);
    check_simplex(full.model.view_weights);
    for (std::size_t h = 0; h < 2; ++h)
        for (Eigen::Index j = 0; j < 2; ++j) {
            const auto col = data.views[h].col(j);
            CHECK(full.model.centers[h].col(j).minCoeff() >= col.minCoeff() - 1e-12);
            CHECK(full.model.centers[h].col(j).maxCoeff() <= col.maxCoeff() + 1e-12);
        }
}

TEST_CASE("objective never increases on random instances") {
    std::mt19937_64 gen(21);
    for (int rep = 0; rep < 20; ++rep) {
        const auto data = testing::random_dataset(gen, 60, 1 + rep % 3, 5);
        HyperParams p;
        p.clusters = 2 + rep % 3;
        p.seed = static_cast<std::uint64_t>(rep);
        p.eta = 0.01 + 0.1 * (rep % 4);
        if (rep % 2) p.beta = BetaMode::fixed(0.2);
        const auto fit = fit_amvfcm(data, p);
        for (std::size_t t = 1; t < fit.objective_trace.size(); ++t) {
            const double prev = fit.objective_trace[t - 1];
            CHECK(fit.objective_trace[t] <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
        }
    }
}

TEST_CASE("hyperparameter validation and warnings") {
    HyperParams p;
    CHECK_NOTHROW(p.validate());
    p.clusters = 1;
    CHECK_THROWS(p.validate());
    p.clusters = 3;
    p.eta = 0.0;
    CHECK_THROWS(p.validate());
    p.eta = 0.025;
    p.max_iters = 0;
    CHECK_THROWS(p.validate());
    p.max_iters = 10;
    CHECK(p.warnings(1000, {4, 4}).empty());
    p.beta = BetaMode::fixed(5.0);
    CHECK_FALSE(p.warnings(1000, {4, 4}).empty());
    CHECK(BetaMode::parse("auto") == BetaMode::automatic());
    CHECK(BetaMode::parse("0.5") == BetaMode::fixed(0.5));
    CHECK_THROWS(BetaMode::parse("warm"));
    const auto b = BetaMode::automatic().resolve(100, {2, 5});
    CHECK(b(0) == 0.02);
    CHECK(b(1) == 0.05);
}
