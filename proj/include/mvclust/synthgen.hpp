#pragma once

#include "mvclust/dataset.hpp"

#include <cstdint>
#include <vector>

namespace mvclust {

/// Isotropic Gaussian mixture whose views share one latent cluster assignment.
struct GmmSpec {
    std::size_t n = 0;
    std::vector<double> mixing;                           // alpha_k, sums to 1
    std::vector<std::vector<Eigen::VectorXd>> means;      // [view][cluster] -> mean of length d_h
    double covariance_scale = 0.5;                        // sigma^2
    std::uint64_t seed = 0;

    std::size_t num_clusters() const { return mixing.size(); }
    void validate() const;
};

/// Appended irrelevant features, i.i.d. U[low, high).
struct NoiseSpec {
    double low = 0.02;
    double high = 0.05;
    std::size_t features_per_view = 1;

    void validate() const;
};

/// Two views, five clusters, sigma^2 = 0.5, uniform mixing.
GmmSpec default_paper_spec(std::size_t n, std::uint64_t seed = 0);

MultiViewDataset generate(const GmmSpec& spec);

MultiViewDataset append_noise(const MultiViewDataset& dataset, const NoiseSpec& noise, std::uint64_t seed);

} // namespace mvclust
