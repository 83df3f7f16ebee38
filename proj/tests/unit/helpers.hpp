#pragma once

#include "mvclust/dataset.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <string>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("mvclust_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

/// Small random dataset with positive entries.
inline mvclust::MultiViewDataset random_dataset(std::mt19937_64& gen, std::size_t n, std::size_t s,
                                                std::size_t max_dims) {
    std::uniform_int_distribution<std::size_t> dim(1, max_dims);
    std::uniform_real_distribution<double> value(0.05, 1.0);
    mvclust::MultiViewDataset data;
    for (std::size_t h = 0; h < s; ++h) {
        mvclust::ViewMatrix x(n, dim(gen));
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = value(gen);
        data.views.push_back(std::move(x));
    }
    return data;
}

} // namespace testing
