#include "mvclust/dataset.hpp"
#include "mvclust/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <string_view>

namespace fs = std::filesystem;

namespace mvclust {

const char* to_string(DataErrorKind kind) noexcept {
    switch (kind) {
        case DataErrorKind::MissingFile: return "missing-file";
        case DataErrorKind::RaggedRows: return "ragged-rows";
        case DataErrorKind::NonNumeric: return "non-numeric";
        case DataErrorKind::RowCountMismatch: return "row-count-mismatch";
        case DataErrorKind::NonFinite: return "non-finite-value";
        case DataErrorKind::EmptyDataset: return "empty-dataset";
        case DataErrorKind::EmptyView: return "empty-view";
        case DataErrorKind::BadLabels: return "bad-labels";
        case DataErrorKind::BadManifest: return "bad-manifest";
    }
    return "unknown";
}

std::vector<std::size_t> MultiViewDataset::dims() const {
    std::vector<std::size_t> d;
    d.reserve(views.size());
    for (const auto& v : views) d.push_back(static_cast<std::size_t>(v.cols()));
    return d;
}

std::size_t MultiViewDataset::total_dims() const {
    std::size_t total = 0;
    for (const auto& v : views) total += static_cast<std::size_t>(v.cols());
    return total;
}

void validate(const MultiViewDataset& dataset) {
    if (dataset.views.empty()) throw DataError(DataErrorKind::EmptyDataset, "dataset has no views");
    const auto n = dataset.views.front().rows();
    for (std::size_t h = 0; h < dataset.views.size(); ++h) {
        const auto& v = dataset.views[h];
        if (v.rows() < 1 || v.cols() < 1)
            throw DataError(DataErrorKind::EmptyView,
                            "view " + std::to_string(h) + " is " + std::to_string(v.rows()) + "x" +
                                std::to_string(v.cols()));
        if (v.rows() != n)
            throw DataError(DataErrorKind::RowCountMismatch,
                            "view " + std::to_string(h) + " has " + std::to_string(v.rows()) +
                                " rows, view 0 has " + std::to_string(n));
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            for (Eigen::Index i = 0; i < v.rows(); ++i)
                if (!std::isfinite(v(i, j)))
                    throw DataError(DataErrorKind::NonFinite, "view " + std::to_string(h) + ", row " +
                                                                  std::to_string(i) + ", col " + std::to_string(j));
    }
    if (!dataset.view_names.empty() && dataset.view_names.size() != dataset.views.size())
        throw DataError(DataErrorKind::BadManifest, "view_names length does not match view count");
    if (dataset.labels) {
        const auto& y = *dataset.labels;
        if (static_cast<Eigen::Index>(y.size()) != n)
            throw DataError(DataErrorKind::RowCountMismatch,
                            "labels have " + std::to_string(y.size()) + " entries, views have " + std::to_string(n));
        num_classes(y);
    }
}

int num_classes(const std::vector<int>& labels) {
    if (labels.empty()) throw DataError(DataErrorKind::BadLabels, "empty label vector");
    const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
    if (*lo < 0) throw DataError(DataErrorKind::BadLabels, "negative label " + std::to_string(*lo));
    std::vector<bool> seen(static_cast<std::size_t>(*hi) + 1, false);
    for (int y : labels) seen[static_cast<std::size_t>(y)] = true;
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k]) throw DataError(DataErrorKind::BadLabels, "class " + std::to_string(k) + " is empty");
    return *hi + 1;
}

namespace {

double rescale(double x, const FeatureRange& r) {
    if (!(r.max > r.min)) return 0.5;
    return std::clamp((x - r.min) / (r.max - r.min), 0.0, 1.0);
}

} // namespace

MultiViewDataset NormalizationRecord::apply(const MultiViewDataset& dataset) const {
    if (ranges.size() != dataset.views.size())
        throw ConfigError("normalization record has " + std::to_string(ranges.size()) + " views, dataset has " +
                          std::to_string(dataset.views.size()));
    MultiViewDataset out = dataset;
    for (std::size_t h = 0; h < out.views.size(); ++h) {
        auto& v = out.views[h];
        if (static_cast<std::size_t>(v.cols()) != ranges[h].size())
            throw ConfigError("normalization record column count mismatch in view " + std::to_string(h));
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            const auto& r = ranges[h][static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = rescale(v(i, j), r);
        }
    }
    return out;
}

std::pair<MultiViewDataset, NormalizationRecord> minmax_normalize(const MultiViewDataset& dataset) {
    NormalizationRecord record;
    record.ranges.resize(dataset.views.size());
    for (std::size_t h = 0; h < dataset.views.size(); ++h) {
        const auto& v = dataset.views[h];
        auto& r = record.ranges[h];
        r.resize(static_cast<std::size_t>(v.cols()));
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            r[static_cast<std::size_t>(j)] = {v.col(j).minCoeff(), v.col(j).maxCoeff()};
        }
    }
    return {record.apply(dataset), std::move(record)};
}

MultiViewDataset select_columns(const MultiViewDataset& dataset, const std::vector<std::size_t>& view_ids,
                                const std::vector<std::vector<std::size_t>>& feature_ids) {
    if (view_ids.size() != feature_ids.size()) throw ConfigError("select_columns: view/feature list size mismatch");
    MultiViewDataset out;
    out.labels = dataset.labels;
    for (std::size_t q = 0; q < view_ids.size(); ++q) {
        const auto& src = dataset.views.at(view_ids[q]);
        const auto& cols = feature_ids[q];
        ViewMatrix v(src.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = src.col(static_cast<Eigen::Index>(cols[j]));
        out.views.push_back(std::move(v));
        if (!dataset.view_names.empty()) out.view_names.push_back(dataset.view_names.at(view_ids[q]));
    }
    return out;
}

// ---- file formats ----------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open '" + path.string() + "'");
    return in;
}

std::string where(const fs::path& path, std::size_t line) { return path.string() + ":" + std::to_string(line); }

template <typename T>
bool parse_number(std::string_view token, T& out) {
    token = trim(token);
    if (token.empty()) return false;
    if (token.front() == '+') token.remove_prefix(1);
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

ViewMatrix read_view_file(const fs::path& path) {
    auto in = open_input(path);
    std::vector<double> values;
    std::size_t cols = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) continue;
        std::size_t count = 0, start = 0;
        while (true) {
            const auto comma = content.find(',', start);
            const auto token = content.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            double x = 0.0;
            if (!parse_number(token, x))
                throw DataError(DataErrorKind::NonNumeric,
                                where(path, line_no) + ": cannot parse '" + std::string(trim(token)) + "'");
            if (!std::isfinite(x))
                throw DataError(DataErrorKind::NonFinite, where(path, line_no) + ": column " + std::to_string(count));
            values.push_back(x);
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) cols = count;
        else if (count != cols)
            throw DataError(DataErrorKind::RaggedRows, where(path, line_no) + ": expected " + std::to_string(cols) +
                                                           " columns, found " + std::to_string(count));
        ++rows;
    }
    if (rows == 0) throw DataError(DataErrorKind::EmptyView, path.string() + " contains no rows");
    ViewMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    return m;
}

std::vector<int> read_label_file(const fs::path& path) {
    auto in = open_input(path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) continue;
        int y = 0;
        if (!parse_number(content, y))
            throw DataError(DataErrorKind::NonNumeric,
                            where(path, line_no) + ": cannot parse label '" + std::string(content) + "'");
        labels.push_back(y);
    }
    if (labels.empty()) throw DataError(DataErrorKind::BadLabels, path.string() + " contains no labels");
    const int lo = *std::min_element(labels.begin(), labels.end());
    if (lo == 1)
        for (auto& y : labels) --y;
    if (lo < 0) throw DataError(DataErrorKind::BadLabels, path.string() + ": negative label " + std::to_string(lo));
    return labels;
}

MultiViewDataset load_dataset(const fs::path& manifest_path) {
    auto in = open_input(manifest_path);
    const fs::path base = manifest_path.parent_path();
    auto resolve = [&](std::string_view p) {
        fs::path path{std::string(p)};
        return path.is_absolute() ? path : base / path;
    };

    std::vector<fs::path> view_paths;
    std::optional<fs::path> label_path;
    std::map<std::size_t, std::string> names;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        const auto eq = content.find('=');
        if (eq == std::string_view::npos)
            throw DataError(DataErrorKind::BadManifest, where(manifest_path, line_no) + ": expected 'key = value'");
        const auto key = trim(content.substr(0, eq));
        const auto value = trim(content.substr(eq + 1));
        if (value.empty())
            throw DataError(DataErrorKind::BadManifest, where(manifest_path, line_no) + ": empty value for '" +
                                                            std::string(key) + "'");
        if (key == "view") {
            view_paths.push_back(resolve(value));
        } else if (key == "labels") {
            label_path = resolve(value);
        } else if (key.starts_with("name.")) {
            std::size_t idx = 0;
            if (!parse_number(key.substr(5), idx))
                throw DataError(DataErrorKind::BadManifest, where(manifest_path, line_no) + ": bad view index in '" +
                                                                std::string(key) + "'");
            names[idx] = std::string(value);
        } else {
            throw DataError(DataErrorKind::BadManifest, where(manifest_path, line_no) + ": unknown key '" +
                                                            std::string(key) + "'");
        }
    }
    if (view_paths.empty())
        throw DataError(DataErrorKind::EmptyDataset, manifest_path.string() + " lists no views");

    MultiViewDataset dataset;
    for (std::size_t h = 0; h < view_paths.size(); ++h) {
        dataset.views.push_back(read_view_file(view_paths[h]));
        if (h > 0 && dataset.views[h].rows() != dataset.views[0].rows())
            throw DataError(DataErrorKind::RowCountMismatch,
                            view_paths[h].string() + " has " + std::to_string(dataset.views[h].rows()) + " rows, " +
                                view_paths[0].string() + " has " + std::to_string(dataset.views[0].rows()));
    }
    if (label_path) {
        auto labels = read_label_file(*label_path);
        if (static_cast<Eigen::Index>(labels.size()) != dataset.views[0].rows())
            throw DataError(DataErrorKind::RowCountMismatch,
                            label_path->string() + " has " + std::to_string(labels.size()) + " labels, " +
                                view_paths[0].string() + " has " + std::to_string(dataset.views[0].rows()) + " rows");
        dataset.labels = std::move(labels);
    }
    if (!names.empty()) {
        dataset.view_names.resize(view_paths.size());
        for (std::size_t h = 0; h < view_paths.size(); ++h) {
            auto it = names.find(h);
            dataset.view_names[h] = it != names.end() ? it->second : "view" + std::to_string(h);
        }
        for (const auto& [idx, name] : names)
            if (idx >= view_paths.size())
                throw DataError(DataErrorKind::BadManifest, "name." + std::to_string(idx) + " refers to a missing view");
    }
    validate(dataset);
    return dataset;
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

} // namespace

void write_view_file(const fs::path& path, const ViewMatrix& view) {
    auto out = open_output(path);
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < view.rows(); ++i) {
        for (Eigen::Index j = 0; j < view.cols(); ++j) {
            if (j) out << ',';
            out << view(i, j);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

void write_label_file(const fs::path& path, const std::vector<int>& labels) {
    auto out = open_output(path);
    for (int y : labels) out << y << '\n';
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

fs::path write_dataset(const fs::path& dir, const MultiViewDataset& dataset, const std::string& manifest_name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    const fs::path manifest = dir / manifest_name;
    auto out = open_output(manifest);
    for (std::size_t h = 0; h < dataset.views.size(); ++h) {
        const std::string file = "view_" + std::to_string(h + 1) + ".csv";
        write_view_file(dir / file, dataset.views[h]);
        out << "view = " << file << '\n';
    }
    if (dataset.labels) {
        write_label_file(dir / "labels.csv", *dataset.labels);
        out << "labels = labels.csv\n";
    }
    for (std::size_t h = 0; h < dataset.view_names.size(); ++h)
        out << "name." << h << " = " << dataset.view_names[h] << '\n';
    if (!out) throw IoError("failed while writing '" + manifest.string() + "'");
    return manifest;
}

} // namespace mvclust
