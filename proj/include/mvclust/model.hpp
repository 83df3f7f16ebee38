#pragma once

#include "mvclust/dataset.hpp"
#include "mvclust/snr.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvclust {

/// How the view-weight temperature is chosen.
struct BetaMode {
    enum class Kind { Auto, Fixed };
    Kind kind = Kind::Auto;
    double value = 0.0;

    static BetaMode automatic() { return {}; }
    static BetaMode fixed(double v) { return {Kind::Fixed, v}; }

    /// Per-view temperatures: d_h / n in auto mode, the scalar otherwise.
    Eigen::VectorXd resolve(std::size_t n, const std::vector<std::size_t>& dims) const;
    std::string to_string() const;
    static BetaMode parse(const std::string& text);

    bool operator==(const BetaMode&) const = default;
};

struct HyperParams {
    std::size_t clusters = 2;
    BetaMode beta = BetaMode::automatic();
    double eta = 0.025;
    std::size_t max_iters = 100;
    double epsilon = 1e-6;
    std::uint64_t seed = 0;
    DeltaClamp delta_clamp{};
    // pruning solver only
    std::size_t prune_warmup = 0;
    double theta_scale = 1.0;

    /// Throws ConfigError on a hard invariant violation.
    void validate() const;
    /// Soft range checks against the recommended beta / eta intervals.
    std::vector<std::string> warnings(std::size_t n, const std::vector<std::size_t>& dims) const;

    bool operator==(const HyperParams&) const = default;
};

/// Memberships U (n x c), per-view centers A^h (c x d_h), per-view feature
/// weights W^h and view weights V. Arrays cover the active views/features only.
struct ClusterModel {
    Eigen::MatrixXd memberships;
    std::vector<Eigen::MatrixXd> centers;
    std::vector<Eigen::VectorXd> feature_weights;
    Eigen::VectorXd view_weights;

    std::size_t num_clusters() const { return static_cast<std::size_t>(memberships.cols()); }
};

/// A single feature (or, with no feature index, a whole view) switched off.
struct Removal {
    std::size_t iteration = 0;
    std::size_t view = 0;
    std::optional<std::size_t> feature;
};

/// Active features and views, indexed by their ORIGINAL positions.
struct ActiveMask {
    std::vector<std::vector<bool>> features;
    std::vector<bool> views;
    std::vector<Removal> history;

    static ActiveMask all(const std::vector<std::size_t>& dims);

    std::vector<std::size_t> active_views() const;
    std::vector<std::size_t> active_features(std::size_t view) const;
    /// Active feature count per original view (0 for eliminated views).
    std::vector<std::size_t> final_dims() const;
    std::size_t active_view_count() const;
    /// 100 * (1 - active features / original features).
    double reduction_percent() const;
};

struct FitResult {
    ClusterModel model;
    SnrWeights delta;                   // active features only
    std::vector<double> objective_trace; // [0] is the initial objective, then one entry per iteration
    std::vector<bool> pruning_events;    // parallel to objective_trace
    std::vector<double> iteration_seconds;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<int> hard_labels;
    ActiveMask mask;
    std::optional<MultiViewDataset> reduced;
    std::vector<std::string> warnings;
};

/// Row-wise argmax; ties go to the lowest cluster index.
std::vector<int> hard_labels(const Eigen::MatrixXd& memberships);

} // namespace mvclust
