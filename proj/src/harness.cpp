#include "mvclust/harness.hpp"
#include "mvclust/aamvfcm.hpp"
#include "mvclust/amvfcm.hpp"
#include "mvclust/error.hpp"
#include "mvclust/rng.hpp"
#include "mvclust/synthgen.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#ifndef MVCLUST_VERSION
#define MVCLUST_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace mvclust {

const char* to_string(Algorithm algo) noexcept {
    return algo == Algorithm::Amvfcm ? "amvfcm" : "aamvfcm";
}

Algorithm parse_algorithm(const std::string& text) {
    if (text == "amvfcm") return Algorithm::Amvfcm;
    if (text == "aamvfcm") return Algorithm::Aamvfcm;
    throw ConfigError("unknown algorithm '" + text + "' (expected amvfcm or aamvfcm)");
}

MultiViewDataset make_synthetic(const SynthSource& source) {
    auto spec = default_paper_spec(source.n, source.seed);
    spec.covariance_scale = source.covariance_scale;
    auto data = generate(spec);
    NoiseSpec noise{source.noise_low, source.noise_high, source.noise_features};
    return append_noise(data, noise, source.seed + 1);
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    params.validate();
}

void apply_seed_override(ExperimentConfig& config) {
    const char* env = std::getenv("MVCLUST_SEED");
    if (env == nullptr || *env == '\0') return;
    try {
        std::size_t used = 0;
        const auto value = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        config.seed_base = value;
    } catch (const std::exception&) {
        throw ConfigError(std::string("MVCLUST_SEED is not an unsigned integer: '") + env + "'");
    }
}

Summary summarize(const std::vector<double>& values) {
    if (values.empty()) return {};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return {*lo, std::clamp(mean, *lo, *hi), *hi};
}

Aggregates aggregate(const std::vector<TrialRecord>& trials) {
    Aggregates agg;
    std::vector<double> ri, ari, ji, nmi_v, fmi, iters, reduction;
    double converged = 0.0;
    for (const auto& t : trials) {
        if (t.scores) {
            ri.push_back(t.scores->ri);
            ari.push_back(t.scores->ari);
            ji.push_back(t.scores->ji);
            nmi_v.push_back(t.scores->nmi);
            fmi.push_back(t.scores->fmi);
        }
        iters.push_back(static_cast<double>(t.iterations));
        reduction.push_back(t.reduction_percent);
        converged += t.converged ? 1.0 : 0.0;
    }
    if (!ri.empty() && ri.size() == trials.size()) {
        agg.ri = summarize(ri);
        agg.ari = summarize(ari);
        agg.ji = summarize(ji);
        agg.nmi = summarize(nmi_v);
        agg.fmi = summarize(fmi);
    }
    agg.iterations = summarize(iters);
    agg.reduction_percent = summarize(reduction);
    agg.converged_fraction = trials.empty() ? 0.0 : converged / static_cast<double>(trials.size());
    return agg;
}

MultiViewDataset prepare_dataset(const ExperimentConfig& config) {
    MultiViewDataset data = std::holds_alternative<fs::path>(config.source)
                                ? load_dataset(std::get<fs::path>(config.source))
                                : make_synthetic(std::get<SynthSource>(config.source));
    validate(data);
    if (config.normalize) data = minmax_normalize(data).first;
    return data;
}

TrialOutcome run_trial(const MultiViewDataset& data, const ExperimentConfig& config, std::uint64_t seed) {
    HyperParams params = config.params;
    params.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    FitResult fit = config.algorithm == Algorithm::Amvfcm ? fit_amvfcm(data, params) : fit_aamvfcm(data, params);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    TrialRecord rec;
    rec.seed = seed;
    rec.iterations = fit.iterations;
    rec.converged = fit.converged;
    if (data.labels) rec.scores = score_all(*data.labels, fit.hard_labels);
    rec.final_dims = fit.mask.final_dims();
    rec.active_views = fit.mask.active_view_count();
    rec.reduction_percent = fit.mask.reduction_percent();
    rec.final_objective = fit.objective_trace.back();
    const std::size_t tail = std::min<std::size_t>(5, fit.objective_trace.size());
    rec.objective_tail.assign(fit.objective_trace.end() - static_cast<std::ptrdiff_t>(tail), fit.objective_trace.end());
    for (std::size_t t = 0; t < fit.pruning_events.size(); ++t)
        if (fit.pruning_events[t]) rec.pruning_iterations.push_back(t);
    if (config.dump_weights) {
        std::vector<ViewWeightsDump> dump;
        const auto views = fit.mask.active_views();
        for (std::size_t q = 0; q < views.size(); ++q) {
            ViewWeightsDump v;
            v.view = views[q];
            v.features = fit.mask.active_features(views[q]);
            const auto& d = fit.delta[q];
            const auto& w = fit.model.feature_weights[q];
            v.delta.assign(d.data(), d.data() + d.size());
            v.feature_weights.assign(w.data(), w.data() + w.size());
            v.view_weight = fit.model.view_weights(static_cast<Eigen::Index>(q));
            dump.push_back(std::move(v));
        }
        rec.weights = std::move(dump);
    }
    rec.wall_seconds = std::max(seconds, 1e-9);
    return {std::move(rec), std::move(fit)};
}

RunReport make_report(const ExperimentConfig& config, const MultiViewDataset& data, std::vector<TrialRecord> trials,
                      double total_seconds, std::vector<std::string> warnings) {
    RunReport report;
    report.engine_version = MVCLUST_VERSION;
    report.prng = Rng::kAlgorithm;
    report.config = config;
    report.n = data.num_samples();
    report.original_dims = data.dims();
    report.has_labels = data.labels.has_value();
    report.trials = std::move(trials);
    report.aggregates = aggregate(report.trials);
    report.warnings = std::move(warnings);
    report.total_seconds = total_seconds;
    return report;
}

RunReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, prepare_dataset(config));
}

RunReport run_experiment(const ExperimentConfig& config, const MultiViewDataset& data) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialRecord> records(config.trials);
    std::vector<std::string> warnings;
    std::exception_ptr failure;
    std::uint64_t failed_seed = 0;
    std::mutex lock;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            const std::uint64_t seed = config.seed_base + t;
            try {
                auto outcome = run_trial(data, config, seed);
                records[t] = std::move(outcome.record);
                if (t == 0) {
                    std::lock_guard guard(lock);
                    warnings = std::move(outcome.fit.warnings);
                }
            } catch (...) {
                std::lock_guard guard(lock);
                if (!failure || seed < failed_seed) {
                    failure = std::current_exception();
                    failed_seed = seed;
                }
                next = config.trials;
            }
        }
    };

    const std::size_t workers = std::min(config.jobs, config.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw Error(e.category(), "trial with seed " + std::to_string(failed_seed) + " failed: " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCategory::Numeric, "trial with seed " + std::to_string(failed_seed) + " failed: " + e.what());
        }
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return make_report(config, data, std::move(records), total, std::move(warnings));
}

// ---- serialization ---------------------------------------------------------

namespace {

json summary_json(const Summary& s) { return {{"min", s.min}, {"avg", s.avg}, {"max", s.max}}; }
Summary summary_from(const json& j) { return {j.at("min").get<double>(), j.at("avg").get<double>(), j.at("max").get<double>()}; }

json optional_summary(const std::optional<Summary>& s) { return s ? summary_json(*s) : json(nullptr); }
std::optional<Summary> optional_summary_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return summary_from(j);
}

json config_json(const ExperimentConfig& c) {
    json source;
    if (std::holds_alternative<fs::path>(c.source)) {
        source = {{"kind", "manifest"}, {"path", std::get<fs::path>(c.source).string()}};
    } else {
        const auto& s = std::get<SynthSource>(c.source);
        source = {{"kind", "synthetic"},          {"n", s.n},
                  {"seed", s.seed},               {"covariance_scale", s.covariance_scale},
                  {"noise_features", s.noise_features}, {"noise_low", s.noise_low},
                  {"noise_high", s.noise_high}};
    }
    const auto& p = c.params;
    return {{"source", source},
            {"algorithm", to_string(c.algorithm)},
            {"clusters", p.clusters},
            {"beta", p.beta.to_string()},
            {"eta", p.eta},
            {"max_iters", p.max_iters},
            {"epsilon", p.epsilon},
            {"delta_clamp", {p.delta_clamp.lo, p.delta_clamp.hi}},
            {"prune_warmup", p.prune_warmup},
            {"theta_scale", p.theta_scale},
            {"trials", c.trials},
            {"seed_base", c.seed_base},
            {"normalize", c.normalize},
            {"jobs", c.jobs},
            {"dump_weights", c.dump_weights}};
}

ExperimentConfig config_from(const json& j) {
    ExperimentConfig c;
    const auto& src = j.at("source");
    if (src.at("kind") == "manifest") {
        c.source = fs::path(src.at("path").get<std::string>());
    } else {
        SynthSource s;
        s.n = src.at("n");
        s.seed = src.at("seed");
        s.covariance_scale = src.at("covariance_scale");
        s.noise_features = src.at("noise_features");
        s.noise_low = src.at("noise_low");
        s.noise_high = src.at("noise_high");
        c.source = s;
    }
    c.algorithm = parse_algorithm(j.at("algorithm"));
    c.params.clusters = j.at("clusters");
    c.params.beta = BetaMode::parse(j.at("beta"));
    c.params.eta = j.at("eta");
    c.params.max_iters = j.at("max_iters");
    c.params.epsilon = j.at("epsilon");
    c.params.delta_clamp = {j.at("delta_clamp").at(0).get<double>(), j.at("delta_clamp").at(1).get<double>()};
    c.params.prune_warmup = j.at("prune_warmup");
    c.params.theta_scale = j.at("theta_scale");
    c.trials = j.at("trials");
    c.seed_base = j.at("seed_base");
    c.normalize = j.at("normalize");
    c.jobs = j.at("jobs");
    c.dump_weights = j.at("dump_weights");
    return c;
}

json trial_json(const TrialRecord& t) {
    json scores = nullptr;
    if (t.scores)
        scores = {{"ri", t.scores->ri}, {"ari", t.scores->ari}, {"ji", t.scores->ji}, {"nmi", t.scores->nmi},
                  {"fmi", t.scores->fmi}};
    json weights = nullptr;
    if (t.weights) {
        weights = json::array();
        for (const auto& v : *t.weights)
            weights.push_back({{"view", v.view},
                               {"features", v.features},
                               {"delta", v.delta},
                               {"feature_weights", v.feature_weights},
                               {"view_weight", v.view_weight}});
    }
    return {{"record", "trial"},
            {"seed", t.seed},
            {"iterations", t.iterations},
            {"converged", t.converged},
            {"scores", scores},
            {"final_dims", t.final_dims},
            {"active_views", t.active_views},
            {"reduction_percent", t.reduction_percent},
            {"final_objective", t.final_objective},
            {"objective_tail", t.objective_tail},
            {"pruning_iterations", t.pruning_iterations},
            {"weights", weights},
            {"timing", {{"wall_seconds", t.wall_seconds}}}};
}

TrialRecord trial_from(const json& j) {
    TrialRecord t;
    t.seed = j.at("seed");
    t.iterations = j.at("iterations");
    t.converged = j.at("converged");
    if (!j.at("scores").is_null()) {
        const auto& s = j.at("scores");
        t.scores = Scores{s.at("ri"), s.at("ari"), s.at("ji"), s.at("nmi"), s.at("fmi")};
    }
    t.final_dims = j.at("final_dims").get<std::vector<std::size_t>>();
    t.active_views = j.at("active_views");
    t.reduction_percent = j.at("reduction_percent");
    t.final_objective = j.at("final_objective");
    t.objective_tail = j.at("objective_tail").get<std::vector<double>>();
    t.pruning_iterations = j.at("pruning_iterations").get<std::vector<std::size_t>>();
    if (!j.at("weights").is_null()) {
        std::vector<ViewWeightsDump> dump;
        for (const auto& v : j.at("weights"))
            dump.push_back({v.at("view"), v.at("features").get<std::vector<std::size_t>>(),
                            v.at("delta").get<std::vector<double>>(), v.at("feature_weights").get<std::vector<double>>(),
                            v.at("view_weight")});
        t.weights = std::move(dump);
    }
    t.wall_seconds = j.at("timing").at("wall_seconds");
    return t;
}

std::string fixed(double x, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << x;
    return os.str();
}

std::string join_dims(const std::vector<std::size_t>& dims) {
    std::string out;
    for (std::size_t h = 0; h < dims.size(); ++h) out += (h ? "," : "") + std::to_string(dims[h]);
    return out;
}

} // namespace

std::string format_records(const RunReport& r) {
    std::ostringstream os;
    json meta = {{"record", "meta"},
                 {"engine", "mvclust"},
                 {"version", r.engine_version},
                 {"prng", r.prng},
                 {"ari", "hubert-arabie"},
                 {"nmi_normalization", "geometric-mean, natural log"},
                 {"config", config_json(r.config)},
                 {"dataset", {{"n", r.n}, {"dims", r.original_dims}, {"has_labels", r.has_labels}}},
                 {"warnings", r.warnings}};
    os << meta.dump() << '\n';
    for (const auto& t : r.trials) os << trial_json(t).dump() << '\n';
    const auto& a = r.aggregates;
    json agg = {{"record", "aggregate"},
                {"metrics",
                 {{"ri", optional_summary(a.ri)},
                  {"ari", optional_summary(a.ari)},
                  {"ji", optional_summary(a.ji)},
                  {"nmi", optional_summary(a.nmi)},
                  {"fmi", optional_summary(a.fmi)}}},
                {"iterations", summary_json(a.iterations)},
                {"reduction_percent", summary_json(a.reduction_percent)},
                {"converged_fraction", a.converged_fraction},
                {"timing", {{"total_seconds", r.total_seconds}}}};
    os << agg.dump() << '\n';
    return os.str();
}

RunReport parse_records(const std::string& text) {
    RunReport r;
    std::istringstream in(text);
    std::string line;
    bool saw_meta = false, saw_aggregate = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            const auto kind = j.at("record").get<std::string>();
            if (kind == "meta") {
                r.engine_version = j.at("version");
                r.prng = j.at("prng");
                r.config = config_from(j.at("config"));
                r.n = j.at("dataset").at("n");
                r.original_dims = j.at("dataset").at("dims").get<std::vector<std::size_t>>();
                r.has_labels = j.at("dataset").at("has_labels");
                r.warnings = j.at("warnings").get<std::vector<std::string>>();
                saw_meta = true;
            } else if (kind == "trial") {
                r.trials.push_back(trial_from(j));
            } else if (kind == "aggregate") {
                const auto& m = j.at("metrics");
                r.aggregates.ri = optional_summary_from(m.at("ri"));
                r.aggregates.ari = optional_summary_from(m.at("ari"));
                r.aggregates.ji = optional_summary_from(m.at("ji"));
                r.aggregates.nmi = optional_summary_from(m.at("nmi"));
                r.aggregates.fmi = optional_summary_from(m.at("fmi"));
                r.aggregates.iterations = summary_from(j.at("iterations"));
                r.aggregates.reduction_percent = summary_from(j.at("reduction_percent"));
                r.aggregates.converged_fraction = j.at("converged_fraction");
                r.total_seconds = j.at("timing").at("total_seconds");
                saw_aggregate = true;
            } else {
                throw ConfigError("unknown record kind '" + kind + "'");
            }
        } catch (const json::exception& e) {
            throw ConfigError("records line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!saw_meta || !saw_aggregate) throw ConfigError("records are missing the meta or aggregate line");
    return r;
}

std::string format_table(const RunReport& r) {
    std::ostringstream os;
    const auto& c = r.config;
    os << "mvclust " << r.engine_version << "  prng=" << r.prng << '\n';
    os << "algorithm=" << to_string(c.algorithm) << "  clusters=" << c.params.clusters
       << "  beta=" << c.params.beta.to_string() << "  eta=" << c.params.eta << "  max_iters=" << c.params.max_iters
       << "  epsilon=" << c.params.epsilon << "  normalize=" << (c.normalize ? "on" : "off") << '\n';
    os << "delta_clamp=[" << c.params.delta_clamp.lo << ", " << c.params.delta_clamp.hi << "]"
       << "  prune_warmup=" << c.params.prune_warmup << "  theta_scale=" << c.params.theta_scale
       << "  trials=" << c.trials << "  seed_base=" << c.seed_base << "  jobs=" << c.jobs << '\n';
    if (std::holds_alternative<fs::path>(c.source)) {
        os << "source=" << std::get<fs::path>(c.source).string() << '\n';
    } else {
        const auto& s = std::get<SynthSource>(c.source);
        os << "source=synthetic n=" << s.n << " seed=" << s.seed << " sigma2=" << s.covariance_scale
           << " noise_features=" << s.noise_features << " noise=[" << s.noise_low << ", " << s.noise_high << ")\n";
    }
    os << "n=" << r.n << "  dims=" << join_dims(r.original_dims) << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    os << '\n';

    os << std::left << std::setw(10) << "seed" << std::right << std::setw(6) << "iters" << std::setw(6) << "conv";
    for (const char* m : {"RI", "ARI", "JI", "NMI", "FMI"}) os << std::setw(9) << m;
    os << std::setw(12) << "dims" << std::setw(7) << "views" << std::setw(9) << "red.%" << std::setw(18)
       << "objective" << std::setw(11) << "time[s]" << '\n';
    for (const auto& t : r.trials) {
        os << std::left << std::setw(10) << t.seed << std::right << std::setw(6) << t.iterations << std::setw(6)
           << (t.converged ? "yes" : "no");
        if (t.scores) {
            for (double v : {t.scores->ri, t.scores->ari, t.scores->ji, t.scores->nmi, t.scores->fmi})
                os << std::setw(9) << fixed(v);
        } else {
            for (int m = 0; m < 5; ++m) os << std::setw(9) << "-";
        }
        os << std::setw(12) << join_dims(t.final_dims) << std::setw(7) << t.active_views << std::setw(9)
           << fixed(t.reduction_percent, 1) << std::setw(18) << std::setprecision(10) << t.final_objective
           << std::setw(11) << fixed(t.wall_seconds, 4) << '\n';
        if (t.weights) {
            for (const auto& v : *t.weights) {
                os << "    view " << v.view << " v=" << fixed(v.view_weight, 6) << " features=" << join_dims(v.features)
                   << " w=";
                for (std::size_t j = 0; j < v.feature_weights.size(); ++j)
                    os << (j ? "," : "") << fixed(v.feature_weights[j], 6);
                os << " delta=";
                for (std::size_t j = 0; j < v.delta.size(); ++j) os << (j ? "," : "") << fixed(v.delta[j], 6);
                os << '\n';
            }
        }
    }

    os << "\naggregate (min / avg / max)\n";
    const auto& a = r.aggregates;
    auto row = [&](const char* name, const std::optional<Summary>& s, int precision = 4) {
        os << "  " << std::left << std::setw(12) << name << std::right;
        if (s)
            os << fixed(s->min, precision) << " / " << fixed(s->avg, precision) << " / " << fixed(s->max, precision);
        else
            os << "-";
        os << '\n';
    };
    row("RI", a.ri);
    row("ARI", a.ari);
    row("JI", a.ji);
    row("NMI", a.nmi);
    row("FMI", a.fmi);
    row("iterations", a.iterations, 1);
    row("reduction %", a.reduction_percent, 1);
    os << "  " << std::left << std::setw(12) << "converged" << fixed(a.converged_fraction, 3) << '\n';
    os << "  " << std::left << std::setw(12) << "runtime[s]" << fixed(r.total_seconds, 3) << '\n';
    return os.str();
}

ReportPaths emit_report(const RunReport& report, const fs::path& prefix) {
    if (prefix.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(prefix.parent_path(), ec);
        if (ec) throw IoError("cannot create '" + prefix.parent_path().string() + "': " + ec.message());
    }
    ReportPaths paths{prefix.string() + ".records.jsonl", prefix.string() + ".table.txt"};
    auto write = [](const fs::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << text;
        if (!out) throw IoError("failed while writing '" + path.string() + "'");
    };
    write(paths.records, format_records(report));
    write(paths.table, format_table(report));
    return paths;
}

RunReport read_report(const fs::path& records_path) {
    std::ifstream in(records_path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + records_path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_records(buf.str());
}

RunReport without_timing(RunReport report) {
    report.total_seconds = 0.0;
    for (auto& t : report.trials) t.wall_seconds = 0.0;
    return report;
}

} // namespace mvclust
