#include "mvclust/amvfcm.hpp"
#include "mvclust/error.hpp"
#include "mvclust/rng.hpp"
#include "engine.hpp"

#include <cmath>
#include <limits>

namespace mvclust {

namespace {

Eigen::VectorXd scale_of(const ClusterModel& model, const SnrWeights& delta, std::size_t h) {
    return model.feature_weights[h].cwiseProduct(delta[h]);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Softmax of `logits` in place with max subtraction.
void softmax_inplace(Eigen::Ref<Eigen::VectorXd> logits) {
    const double top = logits.maxCoeff();
    logits = (logits.array() - top).exp();
    logits /= logits.sum();
}

} // namespace

double weighted_distance(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                         std::size_t i, std::size_t k, std::size_t h) {
    const auto& x = data.views.at(h);
    const auto& a = model.centers.at(h);
    const auto& w = model.feature_weights.at(h);
    const auto& d = delta.at(h);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double diff = x(static_cast<Eigen::Index>(i), j) - a(static_cast<Eigen::Index>(k), j);
        sum += w(j) * d(j) * diff * diff;
    }
    return sum;
}

Eigen::MatrixXd view_distances(const ViewMatrix& x, const Eigen::MatrixXd& centers, const Eigen::VectorXd& scale) {
    Eigen::MatrixXd out(x.rows(), centers.rows());
    for (Eigen::Index k = 0; k < centers.rows(); ++k)
        out.col(k) = (x.rowwise() - centers.row(k)).array().square().matrix() * scale;
    return out;
}

Eigen::MatrixXd aggregate_distances(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data) {
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.num_samples()),
                                                  static_cast<Eigen::Index>(model.centers.front().rows()));
    for (std::size_t h = 0; h < data.views.size(); ++h)
        total += model.view_weights(static_cast<Eigen::Index>(h)) *
                 view_distances(data.views[h], model.centers[h], scale_of(model, delta, h));
    return total;
}

Eigen::MatrixXd memberships_from_distances(const Eigen::MatrixXd& distances) {
    Eigen::MatrixXd u = -distances;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        Eigen::VectorXd row = u.row(i).transpose();
        softmax_inplace(row);
        u.row(i) = row.transpose();
    }
    return u;
}

Eigen::MatrixXd update_membership(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data) {
    return memberships_from_distances(aggregate_distances(model, delta, data));
}

std::vector<Eigen::MatrixXd> update_centers(const ClusterModel& model, const SnrWeights& delta,
                                            const MultiViewDataset& data) {
    const auto& u = model.memberships;
    const Eigen::RowVectorXd mass = u.colwise().sum();
    std::vector<Eigen::MatrixXd> centers;
    centers.reserve(data.views.size());
    for (const auto& x : data.views) {
        Eigen::MatrixXd a = u.transpose() * x;
        for (Eigen::Index k = 0; k < a.rows(); ++k)
            if (mass(k) >= 1e-12) a.row(k) /= mass(k);
        centers.push_back(std::move(a));
    }

    std::vector<bool> used(data.num_samples(), false);
    Eigen::VectorXd worst;
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        if (mass(k) >= 1e-12) continue;
        if (worst.size() == 0) worst = aggregate_distances(model, delta, data).rowwise().minCoeff();
        Eigen::Index pick = -1;
        for (Eigen::Index i = 0; i < worst.size(); ++i)
            if (!used[static_cast<std::size_t>(i)] && (pick < 0 || worst(i) > worst(pick))) pick = i;
        used[static_cast<std::size_t>(pick)] = true;
        for (std::size_t h = 0; h < data.views.size(); ++h) centers[h].row(k) = data.views[h].row(pick);
    }
    return centers;
}

Eigen::VectorXd feature_costs(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                              std::size_t h) {
    const auto& x = data.views.at(h);
    const auto& a = model.centers.at(h);
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(x.cols());
    for (Eigen::Index k = 0; k < a.rows(); ++k)
        cost += ((x.rowwise() - a.row(k)).array().square().matrix().transpose() * model.memberships.col(k));
    return cost.cwiseProduct(delta.at(h));
}

std::vector<Eigen::VectorXd> update_feature_weights(const ClusterModel& model, const SnrWeights& delta,
                                                    const MultiViewDataset& data, double eta) {
    if (!(eta > 0.0)) throw ConfigError("feature weight update needs eta > 0");
    std::vector<Eigen::VectorXd> weights;
    weights.reserve(data.views.size());
    for (std::size_t h = 0; h < data.views.size(); ++h) {
        const double v = model.view_weights(static_cast<Eigen::Index>(h));
        Eigen::VectorXd logits = -delta[h].array().log() - v * feature_costs(model, delta, data, h).array() / eta;
        softmax_inplace(logits);
        weights.push_back(std::move(logits));
    }
    return weights;
}

Eigen::VectorXd view_costs(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data) {
    Eigen::VectorXd costs(static_cast<Eigen::Index>(data.views.size()));
    for (std::size_t h = 0; h < data.views.size(); ++h)
        costs(static_cast<Eigen::Index>(h)) =
            model.memberships.cwiseProduct(view_distances(data.views[h], model.centers[h], scale_of(model, delta, h)))
                .sum();
    return costs;
}

Eigen::VectorXd solve_view_weights(const Eigen::VectorXd& costs, const Eigen::VectorXd& beta) {
    const Eigen::Index s = costs.size();
    if (beta.size() != s) throw ConfigError("view weight solve: cost/temperature size mismatch");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(s);
    if (s == 1) {
        v(0) = 1.0;
        return v;
    }
    const bool uniform_beta = (beta.array() == beta(0)).all();
    if (uniform_beta && beta(0) <= 0.0) {
        Eigen::Index best = 0;
        for (Eigen::Index h = 1; h < s; ++h)
            if (costs(h) < costs(best)) best = h;
        v(best) = 1.0;
        return v;
    }
    if (!(beta.array() > 0.0).all()) throw ConfigError("view temperatures must all be positive or all zero");
    if (uniform_beta) {
        v = -costs / beta(0);
        softmax_inplace(v);
        return v;
    }

    // Stationarity gives v_h = exp((lambda - F_h) / beta_h - 1); find lambda with sum v_h = 1.
    auto log_mass = [&](double lambda) {
        Eigen::ArrayXd e = (lambda - costs.array()) / beta.array() - 1.0;
        const double top = e.maxCoeff();
        return top + std::log((e - top).exp().sum());
    };
    const double log_s = std::log(static_cast<double>(s));
    double lo = ((costs.array() + beta.array() * (1.0 - log_s))).minCoeff();
    double hi = (costs.array() + beta.array()).maxCoeff();
    for (int it = 0; it < 2000 && lo < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (log_mass(mid) > 0.0 ? hi : lo) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    Eigen::ArrayXd e = (lambda - costs.array()) / beta.array() - 1.0;
    v = (e - e.maxCoeff()).exp().matrix();
    v /= v.sum();
    return v;
}

Eigen::VectorXd update_view_weights(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                                    const BetaMode& beta) {
    return solve_view_weights(view_costs(model, delta, data), beta.resolve(data.num_samples(), data.dims()));
}

ObjectiveTerms objective_terms(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                               const Eigen::VectorXd& beta, double eta) {
    ObjectiveTerms t;
    const Eigen::VectorXd f = view_costs(model, delta, data);
    t.distortion = model.view_weights.dot(f);
    t.membership_entropy = model.memberships.unaryExpr([](double x) { return xlogx(x); }).sum();
    for (Eigen::Index h = 0; h < model.view_weights.size(); ++h)
        t.view_entropy += beta(h) * xlogx(model.view_weights(h));
    double feat = 0.0;
    for (std::size_t h = 0; h < model.feature_weights.size(); ++h) {
        const auto& w = model.feature_weights[h];
        for (Eigen::Index j = 0; j < w.size(); ++j)
            if (w(j) > 0.0) feat += w(j) * std::log(delta[h](j) * w(j));
    }
    t.feature_entropy = eta * feat;
    return t;
}

double objective(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                 const BetaMode& beta, double eta) {
    return objective_terms(model, delta, data, beta.resolve(data.num_samples(), data.dims()), eta).total();
}

std::vector<Eigen::MatrixXd> init_centers(const MultiViewDataset& data, std::size_t clusters, std::uint64_t seed) {
    const std::size_t n = data.num_samples();
    if (clusters < 1) throw ConfigError("need at least one cluster");
    if (n < clusters)
        throw ConfigError("n=" + std::to_string(n) + " is smaller than the cluster count " + std::to_string(clusters));

    // standardized concatenation, used for seeding only
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(data.total_dims()));
    Eigen::Index col = 0;
    for (const auto& x : data.views) {
        for (Eigen::Index j = 0; j < x.cols(); ++j, ++col) {
            const double mean = x.col(j).mean();
            const double sd = std::sqrt((x.col(j).array() - mean).square().mean());
            z.col(col) = (x.col(j).array() - mean) / (sd > 0.0 ? sd : 1.0);
        }
    }

    Rng rng(seed);
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    Eigen::VectorXd nearest = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), std::numeric_limits<double>::infinity());
    auto take = [&](std::size_t i) {
        chosen.push_back(i);
        taken[i] = true;
        const Eigen::VectorXd d2 = (z.rowwise() - z.row(static_cast<Eigen::Index>(i))).rowwise().squaredNorm();
        nearest = nearest.cwiseMin(d2);
        nearest(static_cast<Eigen::Index>(i)) = 0.0;
    };

    take(static_cast<std::size_t>(rng.below(n)));
    while (chosen.size() < clusters) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!taken[i]) total += nearest(static_cast<Eigen::Index>(i));
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || nearest(static_cast<Eigen::Index>(i)) <= 0.0) continue;
                acc += nearest(static_cast<Eigen::Index>(i));
                pick = i;
                if (acc > target) break;
            }
        } else {
            // every remaining point coincides with a chosen one
            std::size_t r = static_cast<std::size_t>(rng.below(n - chosen.size()));
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i] && r-- == 0) {
                    pick = i;
                    break;
                }
        }
        take(pick);
    }

    std::vector<Eigen::MatrixXd> centers;
    for (const auto& x : data.views) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(clusters), x.cols());
        for (std::size_t k = 0; k < clusters; ++k) a.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(chosen[k]));
        centers.push_back(std::move(a));
    }
    return centers;
}

ClusterModel initial_model(const MultiViewDataset& data, const SnrWeights& delta, std::size_t clusters,
                           std::uint64_t seed) {
    ClusterModel model;
    model.centers = init_centers(data, clusters, seed);
    for (const auto& x : data.views) model.feature_weights.push_back(Eigen::VectorXd::Constant(x.cols(), 1.0 / static_cast<double>(x.cols())));
    const auto s = static_cast<Eigen::Index>(data.views.size());
    model.view_weights = Eigen::VectorXd::Constant(s, 1.0 / static_cast<double>(s));
    model.memberships = update_membership(model, delta, data);
    return model;
}

FitResult fit_amvfcm(const MultiViewDataset& data, const HyperParams& params) {
    return detail::run_solver(data, params, /*pruning=*/false);
}

} // namespace mvclust
