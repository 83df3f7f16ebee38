// mvclust: command line front end for the multi-view fuzzy clustering engine.
//
//   mvclust synth --n 1500 --seed 7 --out-dir data/
//   mvclust fit   --algo aamvfcm --config data/manifest.txt --clusters 5 --out-dir run/
//   mvclust score --truth data/labels.csv --pred run/pred.csv
//   mvclust bench --algo amvfcm --synth-n 1500 --clusters 5 --trials 10 --out-dir bench/

#include "mvclust/error.hpp"
#include "mvclust/harness.hpp"
#include "mvclust/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mvclust;

namespace {

struct GlobalOptions {
    std::size_t jobs = 1;
    std::string out_dir;
    std::string format = "table";
};

/// Flags shared by `fit` and `bench`.
struct SolverOptions {
    std::string algo = "amvfcm";
    std::string manifest;
    std::size_t clusters = 2;
    double eta = 0.025;
    std::string beta = "auto";
    std::uint64_t seed = 0;
    std::size_t max_iters = 100;
    double epsilon = 1e-6;
    bool normalize = true;
    bool dump_weights = false;
    std::string delta_clamp;
    std::size_t prune_warmup = 0;
    double theta_scale = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--algo", algo, "amvfcm | aamvfcm")->check(CLI::IsMember({"amvfcm", "aamvfcm"}));
        cmd->add_option("--clusters,-c", clusters, "Number of clusters")->required();
        cmd->add_option("--eta", eta, "Feature-weight entropy coefficient");
        cmd->add_option("--beta", beta, "View-weight temperature: auto (d_h/n) or a number");
        cmd->add_option("--max-iters", max_iters, "Iteration cap");
        cmd->add_option("--epsilon", epsilon, "Convergence tolerance on |J(t) - J(t-1)|");
        cmd->add_flag("--normalize,!--no-normalize", normalize, "Min-max scale every feature (default on)");
        cmd->add_flag("--dump-weights", dump_weights, "Include delta, feature and view weights in the report");
        cmd->add_option("--delta-clamp", delta_clamp, "lo,hi bounds for the SNR regularizer");
        cmd->add_option("--prune-warmup", prune_warmup, "Iterations before pruning starts (aamvfcm)");
        cmd->add_option("--theta-scale", theta_scale, "Multiplier on the pruning threshold d_h/n (aamvfcm)");
    }

    HyperParams params() const {
        HyperParams p;
        p.clusters = clusters;
        p.eta = eta;
        p.beta = BetaMode::parse(beta);
        p.max_iters = max_iters;
        p.epsilon = epsilon;
        p.seed = seed;
        p.prune_warmup = prune_warmup;
        p.theta_scale = theta_scale;
        if (!delta_clamp.empty()) {
            const auto comma = delta_clamp.find(',');
            if (comma == std::string::npos) throw ConfigError("--delta-clamp expects lo,hi");
            try {
                p.delta_clamp = {std::stod(delta_clamp.substr(0, comma)), std::stod(delta_clamp.substr(comma + 1))};
            } catch (const std::exception&) {
                throw ConfigError("--delta-clamp expects two numbers, got '" + delta_clamp + "'");
            }
        }
        p.validate();
        return p;
    }
};

void print_report(const RunReport& report, const GlobalOptions& global) {
    std::cout << (global.format == "records" ? format_records(report) : format_table(report));
}

void write_reduced(const fs::path& dir, const FitResult& fit) {
    write_dataset(dir, *fit.reduced);
    nlohmann::json mapping = {{"views", nlohmann::json::array()}};
    for (auto h : fit.mask.active_views())
        mapping["views"].push_back({{"original_view", h}, {"columns", fit.mask.active_features(h)}});
    std::ofstream out(dir / "columns.json");
    if (!out) throw IoError("cannot write '" + (dir / "columns.json").string() + "'");
    out << mapping.dump(2) << '\n';
}

int run_synth(const GlobalOptions& global, std::size_t n, std::uint64_t seed, const NoiseSpec& noise, double sigma2) {
    if (global.out_dir.empty()) throw ConfigError("synth needs --out-dir");
    auto spec = default_paper_spec(n, seed);
    spec.covariance_scale = sigma2;
    const auto data = append_noise(generate(spec), noise, seed + 1);
    const auto manifest = write_dataset(global.out_dir, data);
    std::cout << "wrote " << manifest.string() << "  n=" << data.num_samples() << "  views=" << data.num_views()
              << "  prng=" << "mt19937_64+u53+marsaglia-polar" << '\n';
    return 0;
}

int run_fit(const GlobalOptions& global, const SolverOptions& opts) {
    if (opts.manifest.empty()) throw ConfigError("fit needs --config <manifest>");
    ExperimentConfig config;
    config.source = fs::path(opts.manifest);
    config.algorithm = parse_algorithm(opts.algo);
    config.params = opts.params();
    config.trials = 1;
    config.seed_base = opts.seed;
    config.normalize = opts.normalize;
    config.jobs = 1;
    config.dump_weights = opts.dump_weights;
    apply_seed_override(config);
    config.validate();

    const auto data = prepare_dataset(config);
    auto outcome = run_trial(data, config, config.seed_base);
    for (const auto& w : outcome.fit.warnings) std::cerr << "warning: " << w << '\n';
    const auto report = make_report(config, data, {outcome.record}, outcome.record.wall_seconds, outcome.fit.warnings);
    print_report(report, global);

    if (!global.out_dir.empty()) {
        const fs::path dir = global.out_dir;
        emit_report(report, dir / "fit");
        write_label_file(dir / "pred.csv", outcome.fit.hard_labels);
        if (outcome.fit.reduced) write_reduced(dir / "reduced", outcome.fit);
    }
    return 0;
}

int run_score(const std::string& truth_path, const std::string& pred_path) {
    const auto truth = read_label_file(truth_path);
    const auto pred = read_label_file(pred_path);
    const auto s = score_all(truth, pred);
    std::ostringstream os;
    os.precision(10);
    os << "ri=" << s.ri << "\nari=" << s.ari << "\nji=" << s.ji << "\nnmi=" << s.nmi << "\nfmi=" << s.fmi << '\n';
    nlohmann::json record = {{"record", "scores"}, {"n", truth.size()}, {"ri", s.ri},  {"ari", s.ari},
                             {"ji", s.ji},         {"nmi", s.nmi},       {"fmi", s.fmi}};
    std::cout << os.str() << record.dump() << '\n';
    return 0;
}

int run_bench(const GlobalOptions& global, const SolverOptions& opts, const SynthSource& synth, std::size_t trials,
              std::uint64_t seed_base, const std::string& label) {
    ExperimentConfig config;
    if (!opts.manifest.empty()) config.source = fs::path(opts.manifest);
    else config.source = synth;
    config.algorithm = parse_algorithm(opts.algo);
    config.params = opts.params();
    config.trials = trials;
    config.seed_base = seed_base;
    config.normalize = opts.normalize;
    config.jobs = global.jobs;
    config.dump_weights = opts.dump_weights;
    apply_seed_override(config);

    const auto report = run_experiment(config);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    print_report(report, global);
    if (!global.out_dir.empty()) emit_report(report, fs::path(global.out_dir) / label);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view entropy-regularized fuzzy clustering"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--jobs,-j", global.jobs, "Concurrent trials")->check(CLI::PositiveNumber);
    app.add_option("--out-dir,-o", global.out_dir, "Directory for generated files and reports");
    app.add_option("--format", global.format, "Stdout format")->check(CLI::IsMember({"table", "records"}));

    auto* synth = app.add_subcommand("synth", "Generate the two-view, five-cluster benchmark");
    std::size_t synth_n = 15000;
    std::uint64_t synth_seed = 0;
    double synth_sigma2 = 0.5;
    NoiseSpec noise;
    synth->add_option("--n", synth_n, "Sample count");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--sigma2", synth_sigma2, "Isotropic cluster variance");
    synth->add_option("--noise-features", noise.features_per_view, "Uniform noise columns appended per view");
    synth->add_option("--noise-low", noise.low, "Noise lower bound (inclusive)");
    synth->add_option("--noise-high", noise.high, "Noise upper bound (exclusive)");

    auto* fit = app.add_subcommand("fit", "Fit one model on a manifest dataset");
    SolverOptions fit_opts;
    fit_opts.attach(fit);
    fit->add_option("--config", fit_opts.manifest, "Dataset manifest")->required();
    fit->add_option("--seed", fit_opts.seed, "Initialization seed");

    auto* score = app.add_subcommand("score", "Compare two label files");
    std::string truth_path, pred_path;
    score->add_option("--truth", truth_path, "Ground-truth label file")->required();
    score->add_option("--pred", pred_path, "Predicted label file")->required();

    auto* bench = app.add_subcommand("bench", "Multi-trial experiment with min/avg/max aggregation");
    SolverOptions bench_opts;
    SynthSource bench_synth;
    std::size_t trials = 10;
    std::uint64_t seed_base = 0;
    std::string label = "bench";
    bench_opts.attach(bench);
    bench->add_option("--config", bench_opts.manifest, "Dataset manifest (default: generated benchmark)");
    bench->add_option("--synth-n", bench_synth.n, "Generated benchmark size");
    bench->add_option("--synth-seed", bench_synth.seed, "Generated benchmark seed");
    bench->add_option("--sigma2", bench_synth.covariance_scale, "Generated benchmark cluster variance");
    bench->add_option("--noise-features", bench_synth.noise_features, "Noise columns per view");
    bench->add_option("--noise-low", bench_synth.noise_low, "Noise lower bound");
    bench->add_option("--noise-high", bench_synth.noise_high, "Noise upper bound");
    bench->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    bench->add_option("--seed-base", seed_base, "Seed of the first trial ($MVCLUST_SEED overrides)");
    bench->add_option("--label", label, "Report file prefix inside --out-dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorCategory::Config);
    }

    try {
        if (*synth) return run_synth(global, synth_n, synth_seed, noise, synth_sigma2);
        if (*fit) return run_fit(global, fit_opts);
        if (*score) return run_score(truth_path, pred_path);
        if (*bench) return run_bench(global, bench_opts, bench_synth, trials, seed_base, label);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
