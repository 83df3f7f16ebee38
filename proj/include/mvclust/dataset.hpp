#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mvclust {

/// n samples x d_h features of one view.
using ViewMatrix = Eigen::MatrixXd;

/// s aligned views over the same n samples, with optional ground truth.
struct MultiViewDataset {
    std::vector<ViewMatrix> views;
    std::optional<std::vector<int>> labels;
    std::vector<std::string> view_names;

    std::size_t num_samples() const { return views.empty() ? 0 : static_cast<std::size_t>(views.front().rows()); }
    std::size_t num_views() const { return views.size(); }
    std::vector<std::size_t> dims() const;
    std::size_t total_dims() const;
};

/// Column range used to rescale one feature.
struct FeatureRange {
    double min = 0.0;
    double max = 1.0;
};

/// Per view, per feature (min, max) of the raw data.
struct NormalizationRecord {
    std::vector<std::vector<FeatureRange>> ranges;

    /// Rescale `dataset` with the stored ranges (constant columns go to 0.5).
    MultiViewDataset apply(const MultiViewDataset& dataset) const;
};

/// Throws DataError naming the first violated invariant.
void validate(const MultiViewDataset& dataset);

/// Number of distinct classes in validated labels (max + 1).
int num_classes(const std::vector<int>& labels);

/// Rescales every column into [0,1]; constant columns map to 0.5.
std::pair<MultiViewDataset, NormalizationRecord> minmax_normalize(const MultiViewDataset& dataset);

/// Copy of `dataset` keeping only the listed views and, per kept view, the listed columns.
MultiViewDataset select_columns(const MultiViewDataset& dataset,
                                const std::vector<std::size_t>& view_ids,
                                const std::vector<std::vector<std::size_t>>& feature_ids);

// ---- file formats ----------------------------------------------------------

/// Comma separated numeric matrix, one sample per line, no header.
ViewMatrix read_view_file(const std::filesystem::path& path);

/// One integer per line. 1-based files are shifted to 0-based. Empty classes are
/// allowed here (predictions); validate() enforces them for ground truth.
std::vector<int> read_label_file(const std::filesystem::path& path);

/// Reads a manifest (`view = path`, `labels = path`, `name.<i> = str`) and
/// everything it references. Relative paths resolve against the manifest dir.
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

void write_view_file(const std::filesystem::path& path, const ViewMatrix& view);
void write_label_file(const std::filesystem::path& path, const std::vector<int>& labels);

/// Writes view_<h>.csv, labels.csv (if present) and `manifest_name` into `dir`.
/// Returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir, const MultiViewDataset& dataset,
                                    const std::string& manifest_name = "manifest.txt");

} // namespace mvclust
