#include "mvclust/synthgen.hpp"
#include "mvclust/error.hpp"
#include "mvclust/rng.hpp"

#include <cmath>
#include <numeric>

namespace mvclust {

void GmmSpec::validate() const {
    const std::size_t c = num_clusters();
    if (c == 0) throw ConfigError("GMM spec has no clusters");
    double total = 0.0;
    for (double a : mixing) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("mixing weights must be finite and nonnegative");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixing weights sum to " + std::to_string(total) + ", not 1");
    if (means.empty()) throw ConfigError("GMM spec has no views");
    for (std::size_t h = 0; h < means.size(); ++h) {
        if (means[h].size() != c)
            throw ConfigError("view " + std::to_string(h) + " lists " + std::to_string(means[h].size()) +
                              " cluster means, expected " + std::to_string(c));
        const auto d = means[h].front().size();
        if (d < 1) throw ConfigError("view " + std::to_string(h) + " has zero-length means");
        for (const auto& mu : means[h])
            if (mu.size() != d) throw ConfigError("view " + std::to_string(h) + " has means of differing length");
    }
    if (!(covariance_scale >= 0.0) || !std::isfinite(covariance_scale))
        throw ConfigError("covariance scale must be finite and nonnegative");
    if (n < c) throw ConfigError("n=" + std::to_string(n) + " is smaller than the cluster count " + std::to_string(c));
}

void NoiseSpec::validate() const {
    if (!std::isfinite(low) || !std::isfinite(high) || !(low < high))
        throw ConfigError("noise interval must satisfy low < high with finite bounds");
}

GmmSpec default_paper_spec(std::size_t n, std::uint64_t seed) {
    auto pts = [](std::initializer_list<std::pair<double, double>> xs) {
        std::vector<Eigen::VectorXd> out;
        for (auto [a, b] : xs) out.push_back(Eigen::Vector2d(a, b));
        return out;
    };
    GmmSpec spec;
    spec.n = n;
    spec.mixing.assign(5, 0.2);
    spec.means.push_back(pts({{8, 2}, {8, 8}, {5, 13}, {14, 2}, {20, 2}}));
    spec.means.push_back(pts({{2, 2}, {6, 6}, {11, 2}, {6, 12}, {17, 2}}));
    spec.covariance_scale = 0.5;
    spec.seed = seed;
    spec.validate();
    return spec;
}

MultiViewDataset generate(const GmmSpec& spec) {
    spec.validate();
    const std::size_t c = spec.num_clusters();
    const double sigma = std::sqrt(spec.covariance_scale);
    Rng rng(spec.seed);

    MultiViewDataset out;
    for (const auto& view_means : spec.means)
        out.views.emplace_back(static_cast<Eigen::Index>(spec.n), view_means.front().size());
    std::vector<int> labels(spec.n);

    std::vector<double> cumulative(c);
    std::partial_sum(spec.mixing.begin(), spec.mixing.end(), cumulative.begin());

    for (std::size_t i = 0; i < spec.n; ++i) {
        const double u = rng.uniform() * cumulative.back();
        std::size_t k = 0;
        while (k + 1 < c && u >= cumulative[k]) ++k;
        labels[i] = static_cast<int>(k);
        for (std::size_t h = 0; h < spec.means.size(); ++h) {
            const auto& mu = spec.means[h][k];
            for (Eigen::Index j = 0; j < mu.size(); ++j)
                out.views[h](static_cast<Eigen::Index>(i), j) = mu(j) + sigma * rng.normal();
        }
    }
    out.labels = std::move(labels);
    return out;
}

MultiViewDataset append_noise(const MultiViewDataset& dataset, const NoiseSpec& noise, std::uint64_t seed) {
    noise.validate();
    if (noise.features_per_view == 0) return dataset;
    Rng rng(seed);
    const auto extra = static_cast<Eigen::Index>(noise.features_per_view);
    MultiViewDataset out = dataset;
    for (auto& view : out.views) {
        const auto d = view.cols();
        ViewMatrix grown(view.rows(), d + extra);
        grown.leftCols(d) = view;
        for (Eigen::Index i = 0; i < view.rows(); ++i)
            for (Eigen::Index j = 0; j < extra; ++j) {
                double z = noise.low + (noise.high - noise.low) * rng.uniform();
                if (z >= noise.high) z = std::nextafter(noise.high, noise.low);
                grown(i, d + j) = z;
            }
        view = std::move(grown);
    }
    return out;
}

} // namespace mvclust
