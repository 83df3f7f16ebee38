#pragma once

#include "mvclust/model.hpp"

namespace mvclust {

// Block updates of the entropy-regularized multi-view objective
//
//   J = sum_h v_h sum_i sum_k u_ik D_ik^h + sum_i sum_k u_ik log u_ik
//     + sum_h beta_h v_h log v_h + eta sum_h sum_j w_j^h log(delta_j^h w_j^h)
//
// with D_ik^h = sum_j w_j^h delta_j^h (x_ij^h - a_kj^h)^2. Each update is the
// exact minimizer of J over its block with the other blocks held fixed. All
// functions take the dataset the model is defined on (active columns only).

/// D_ik^h for a single (sample, cluster, view).
double weighted_distance(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                         std::size_t i, std::size_t k, std::size_t h);

/// n x c matrix of D_ik for one view; `scale` is w .* delta.
Eigen::MatrixXd view_distances(const ViewMatrix& x, const Eigen::MatrixXd& centers, const Eigen::VectorXd& scale);

/// sum_h v_h D_ik^h.
Eigen::MatrixXd aggregate_distances(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data);

/// Row softmax of -distances with max subtraction.
Eigen::MatrixXd memberships_from_distances(const Eigen::MatrixXd& distances);

Eigen::MatrixXd update_membership(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data);

/// Membership-weighted means. A cluster whose total membership is below 1e-12
/// is re-seeded at the sample farthest (in aggregate distance) from its best center.
std::vector<Eigen::MatrixXd> update_centers(const ClusterModel& model, const SnrWeights& delta,
                                            const MultiViewDataset& data);

/// E_j^h = delta_j^h sum_i sum_k u_ik (x_ij^h - a_kj^h)^2 for view h.
Eigen::VectorXd feature_costs(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                              std::size_t h);

std::vector<Eigen::VectorXd> update_feature_weights(const ClusterModel& model, const SnrWeights& delta,
                                                    const MultiViewDataset& data, double eta);

/// F_h = sum_i sum_k u_ik D_ik^h.
Eigen::VectorXd view_costs(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data);

/// argmin_v sum_h v_h F_h + sum_h beta_h v_h log v_h on the simplex. Equal
/// temperatures reduce to softmax(-F / beta); unequal ones are solved through
/// the Lagrange multiplier by bisection.
Eigen::VectorXd solve_view_weights(const Eigen::VectorXd& costs, const Eigen::VectorXd& beta);

Eigen::VectorXd update_view_weights(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                                    const BetaMode& beta);

struct ObjectiveTerms {
    double distortion = 0.0;         // sum_h v_h sum_ik u_ik D_ik^h
    double membership_entropy = 0.0; // sum_ik u_ik log u_ik
    double view_entropy = 0.0;       // sum_h beta_h v_h log v_h
    double feature_entropy = 0.0;    // eta sum_hj w log(delta w)

    double total() const { return distortion + membership_entropy + view_entropy + feature_entropy; }
};

ObjectiveTerms objective_terms(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                               const Eigen::VectorXd& beta, double eta);

double objective(const ClusterModel& model, const SnrWeights& delta, const MultiViewDataset& data,
                 const BetaMode& beta, double eta);

/// k-means++ seeding on the standardized concatenation of all views.
/// Returned centers are in the original coordinates of each view.
std::vector<Eigen::MatrixXd> init_centers(const MultiViewDataset& data, std::size_t clusters, std::uint64_t seed);

/// Seeded centers, uniform feature/view weights, memberships from those.
ClusterModel initial_model(const MultiViewDataset& data, const SnrWeights& delta, std::size_t clusters,
                           std::uint64_t seed);

FitResult fit_amvfcm(const MultiViewDataset& data, const HyperParams& params);

} // namespace mvclust
