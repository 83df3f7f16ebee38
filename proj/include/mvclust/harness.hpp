#pragma once

#include "mvclust/dataset.hpp"
#include "mvclust/metrics.hpp"
#include "mvclust/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mvclust {

enum class Algorithm { Amvfcm, Aamvfcm };

const char* to_string(Algorithm algo) noexcept;
Algorithm parse_algorithm(const std::string& text);

/// Generated benchmark data: the two-view, five-cluster mixture plus noise columns.
struct SynthSource {
    std::size_t n = 1500;
    std::uint64_t seed = 0;
    double covariance_scale = 0.5;
    std::size_t noise_features = 1;
    double noise_low = 0.02;
    double noise_high = 0.05;

    bool operator==(const SynthSource&) const = default;
};

/// Builds the dataset described by `source` (noise seeded with seed + 1).
MultiViewDataset make_synthetic(const SynthSource& source);

struct ExperimentConfig {
    std::variant<std::filesystem::path, SynthSource> source = SynthSource{};
    Algorithm algorithm = Algorithm::Amvfcm;
    HyperParams params;       // params.seed is replaced by each trial's seed
    std::size_t trials = 1;
    std::uint64_t seed_base = 0;
    bool normalize = true;
    std::size_t jobs = 1;
    bool dump_weights = false;

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

/// Replaces seed_base with $MVCLUST_SEED when that variable is set.
void apply_seed_override(ExperimentConfig& config);

/// Final weights of one active view, keyed by original indices.
struct ViewWeightsDump {
    std::size_t view = 0;
    std::vector<std::size_t> features;
    std::vector<double> delta;
    std::vector<double> feature_weights;
    double view_weight = 0.0;

    bool operator==(const ViewWeightsDump&) const = default;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<Scores> scores;
    std::vector<std::size_t> final_dims; // per original view, 0 when eliminated
    std::size_t active_views = 0;
    double reduction_percent = 0.0;
    double final_objective = 0.0;
    std::vector<double> objective_tail;
    std::vector<std::size_t> pruning_iterations;
    std::optional<std::vector<ViewWeightsDump>> weights;
    // timing, excluded from determinism comparisons
    double wall_seconds = 0.0;

    bool operator==(const TrialRecord&) const = default;
};

struct Summary {
    double min = 0.0;
    double avg = 0.0;
    double max = 0.0;

    bool operator==(const Summary&) const = default;
};

struct Aggregates {
    std::optional<Summary> ri, ari, ji, nmi, fmi;
    Summary iterations;
    Summary reduction_percent;
    double converged_fraction = 0.0;

    bool operator==(const Aggregates&) const = default;
};

/// min / mean / max; the mean is clamped into [min, max] against rounding.
Summary summarize(const std::vector<double>& values);
Aggregates aggregate(const std::vector<TrialRecord>& trials);

struct RunReport {
    std::string engine_version;
    std::string prng;
    ExperimentConfig config;
    std::size_t n = 0;
    std::vector<std::size_t> original_dims;
    bool has_labels = false;
    std::vector<TrialRecord> trials;
    Aggregates aggregates;
    std::vector<std::string> warnings;
    // timing
    double total_seconds = 0.0;

    bool operator==(const RunReport&) const = default;
};

/// Loads (or generates) and optionally normalizes the configured dataset.
MultiViewDataset prepare_dataset(const ExperimentConfig& config);

struct TrialOutcome {
    TrialRecord record;
    FitResult fit;
};

/// One fit of the configured algorithm with the given seed, scored against
/// the dataset labels when present.
TrialOutcome run_trial(const MultiViewDataset& data, const ExperimentConfig& config, std::uint64_t seed);

/// Assembles a report from finished trials.
RunReport make_report(const ExperimentConfig& config, const MultiViewDataset& data, std::vector<TrialRecord> trials,
                      double total_seconds, std::vector<std::string> warnings = {});

/// Runs trials with seeds seed_base .. seed_base + trials - 1, up to `jobs` at a time.
RunReport run_experiment(const ExperimentConfig& config);
RunReport run_experiment(const ExperimentConfig& config, const MultiViewDataset& prepared);

/// Line-delimited JSON: one meta line, one line per trial, one aggregate line.
std::string format_records(const RunReport& report);
RunReport parse_records(const std::string& text);

/// Aligned human-readable table.
std::string format_table(const RunReport& report);

struct ReportPaths {
    std::filesystem::path records;
    std::filesystem::path table;
};

/// Writes `<prefix>.records.jsonl` and `<prefix>.table.txt`.
ReportPaths emit_report(const RunReport& report, const std::filesystem::path& prefix);
RunReport read_report(const std::filesystem::path& records_path);

/// Copy of the report with every timing field zeroed.
RunReport without_timing(RunReport report);

} // namespace mvclust
