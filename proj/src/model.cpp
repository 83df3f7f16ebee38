#include "mvclust/model.hpp"
#include "mvclust/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mvclust {

Eigen::VectorXd BetaMode::resolve(std::size_t n, const std::vector<std::size_t>& dims) const {
    Eigen::VectorXd beta(static_cast<Eigen::Index>(dims.size()));
    for (std::size_t h = 0; h < dims.size(); ++h)
        beta(static_cast<Eigen::Index>(h)) =
            kind == Kind::Auto ? static_cast<double>(dims[h]) / static_cast<double>(n) : value;
    return beta;
}

std::string BetaMode::to_string() const {
    if (kind == Kind::Auto) return "auto";
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

BetaMode BetaMode::parse(const std::string& text) {
    if (text == "auto") return automatic();
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v) || v < 0.0)
        throw ConfigError("beta must be 'auto' or a nonnegative number, got '" + text + "'");
    return fixed(v);
}

void HyperParams::validate() const {
    if (clusters < 2) throw ConfigError("cluster count must be at least 2");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be positive and finite");
    if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    if (beta.kind == BetaMode::Kind::Fixed && (!(beta.value >= 0.0) || !std::isfinite(beta.value)))
        throw ConfigError("fixed beta must be nonnegative and finite");
    if (!(theta_scale > 0.0) || !std::isfinite(theta_scale)) throw ConfigError("theta_scale must be positive");
    delta_clamp.validate();
}

std::vector<std::string> HyperParams::warnings(std::size_t n, const std::vector<std::size_t>& dims) const {
    std::vector<std::string> out;
    if (dims.empty() || n == 0) return out;
    if (beta.kind == BetaMode::Kind::Fixed) {
        for (std::size_t h = 0; h < dims.size(); ++h) {
            const double lo = static_cast<double>(dims[h]) / static_cast<double>(n);
            if (beta.value < lo || beta.value > 3.0 * lo) {
                std::ostringstream os;
                os << "beta=" << beta.value << " outside the recommended [" << lo << ", " << 3.0 * lo
                   << "] for view " << h;
                out.push_back(os.str());
            }
        }
    }
    const auto [dmin, dmax] = std::minmax_element(dims.begin(), dims.end());
    const double eta_hi = 0.025 * static_cast<double>(*dmin) / static_cast<double>(*dmax);
    if (eta < 0.0015 || eta > eta_hi) {
        std::ostringstream os;
        os << "eta=" << eta << " outside the recommended [0.0015, " << eta_hi << "]";
        out.push_back(os.str());
    }
    return out;
}

ActiveMask ActiveMask::all(const std::vector<std::size_t>& dims) {
    ActiveMask mask;
    mask.views.assign(dims.size(), true);
    for (auto d : dims) mask.features.emplace_back(d, true);
    return mask;
}

std::vector<std::size_t> ActiveMask::active_views() const {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < views.size(); ++h)
        if (views[h]) out.push_back(h);
    return out;
}

std::vector<std::size_t> ActiveMask::active_features(std::size_t view) const {
    std::vector<std::size_t> out;
    if (!views.at(view)) return out;
    const auto& f = features.at(view);
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j]) out.push_back(j);
    return out;
}

std::vector<std::size_t> ActiveMask::final_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < views.size(); ++h) out.push_back(active_features(h).size());
    return out;
}

std::size_t ActiveMask::active_view_count() const {
    return static_cast<std::size_t>(std::count(views.begin(), views.end(), true));
}

double ActiveMask::reduction_percent() const {
    std::size_t total = 0, active = 0;
    for (const auto& f : features) total += f.size();
    for (auto d : final_dims()) active += d;
    if (total == 0) return 0.0;
    return 100.0 * (1.0 - static_cast<double>(active) / static_cast<double>(total));
}

std::vector<int> hard_labels(const Eigen::MatrixXd& memberships) {
    std::vector<int> labels(static_cast<std::size_t>(memberships.rows()));
    for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < memberships.cols(); ++k)
            if (memberships(i, k) > memberships(i, best)) best = k;
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return labels;
}

} // namespace mvclust
