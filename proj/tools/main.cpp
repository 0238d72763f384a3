#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "driftbench/bench.hpp"
#include "driftbench/datagen.hpp"
#include "driftbench/detector.hpp"
#include "driftbench/ingest.hpp"
#include "driftbench/json_io.hpp"
#include "driftbench/report.hpp"
#include "driftbench/version.hpp"

namespace {

using Json = nlohmann::ordered_json;
namespace db = driftbench;

// Resolved settings are echoed to stderr before any work so every run is
// self-documenting; stdout stays reserved for command payloads.
void echo_config(const std::string& command, const Json& resolved) {
    std::cerr << "config " << command << ": " << resolved.dump() << "\n";
}

Json window_mode_json(const db::bench::WindowMode& mode) {
    if (mode.kind == db::bench::WindowMode::Kind::kByCount) {
        return Json{{"kind", "by_count"}, {"count", mode.count}};
    }
    return Json{{"kind", "by_time"}, {"duration_seconds", mode.duration_seconds}};
}

db::detector::DriftTestConfig make_drift_config(const std::string& test, double alpha, double tau,
                                                double severity_threshold,
                                                const std::string& severity_mode) {
    db::detector::DriftTestConfig cfg;
    cfg.test_kind = test == "ks" ? db::detector::TestKind::kKs
                                 : db::detector::TestKind::kNormalizedWasserstein;
    cfg.alpha = alpha;
    cfg.tau = tau;
    cfg.severity_threshold = severity_threshold;
    cfg.severity_mode = severity_mode == "binary" ? db::detector::SeverityMode::kBinary
                                                  : db::detector::SeverityMode::kStatistic;
    return cfg;
}

Json drift_config_json(const std::string& test, const db::detector::DriftTestConfig& cfg) {
    return Json{{"test", test},
                {"alpha", cfg.alpha},
                {"tau", cfg.tau},
                {"severity_threshold", cfg.severity_threshold},
                {"severity_mode",
                 cfg.severity_mode == db::detector::SeverityMode::kBinary ? "binary" : "statistic"}};
}

struct GenerateArgs {
    std::string pattern = "none";
    db::datagen::DriftScenario scenario;
    std::string out;
};

int run_generate(GenerateArgs& args) {
    args.scenario.pattern = db::datagen::pattern_from_name(args.pattern);

    Json resolved = Json::parse(db::datagen::scenario_to_json(args.scenario));
    resolved["out"] = args.out;
    echo_config("generate", resolved);

    const db::Dataset data = db::datagen::generate_stream(args.scenario);
    db::bench::write_csv(data, args.out);
    std::filesystem::path scenario_path(args.out);
    scenario_path.replace_extension(".scenario.json");
    db::datagen::save_scenario(args.scenario, scenario_path.string());

    std::cerr << "wrote " << data.samples.size() << " samples to " << args.out << " and "
              << scenario_path.string() << "\n";
    return 0;
}

struct BenchmarkArgs {
    std::string data;
    std::string label_col = "label";
    std::string time_col = "ts";
    std::size_t train_windows = 7;
    std::string window_by = "count:2000";
    std::string test = "wasserstein";
    double alpha = 0.05;
    double tau = 0.05;
    double severity_threshold = 0.05;
    std::string severity_mode = "binary";
    std::string weighting = "weighted";
    std::size_t trees = 50;
    std::size_t max_depth = 12;
    std::size_t min_leaf = 2;
    std::uint64_t seed = 0;
    std::string out;
};

db::bench::BenchmarkConfig make_benchmark_config(const BenchmarkArgs& args) {
    db::bench::BenchmarkConfig cfg;
    cfg.train_windows = args.train_windows;
    cfg.window_mode = db::bench::parse_window_mode(args.window_by);
    cfg.drift = make_drift_config(args.test, args.alpha, args.tau, args.severity_threshold,
                                  args.severity_mode);
    cfg.weighted = args.weighting == "weighted";
    cfg.hyperparams.tree_count = args.trees;
    cfg.hyperparams.max_depth = args.max_depth;
    cfg.hyperparams.min_leaf_size = args.min_leaf;
    cfg.rng_seed = args.seed;
    cfg.hyperparams.rng_seed = args.seed;
    return cfg;
}

int run_benchmark_cmd(BenchmarkArgs& args) {
    const auto cfg = make_benchmark_config(args);
    Json resolved{{"data", args.data},
                  {"label_column", args.label_col},
                  {"time_column", args.time_col},
                  {"train_windows", cfg.train_windows},
                  {"window_mode", window_mode_json(cfg.window_mode)},
                  {"drift", drift_config_json(args.test, cfg.drift)},
                  {"weighting", args.weighting},
                  {"hyperparams",
                   Json{{"tree_count", cfg.hyperparams.tree_count},
                        {"max_depth", cfg.hyperparams.max_depth},
                        {"min_leaf_size", cfg.hyperparams.min_leaf_size}}},
                  {"rng_seed", cfg.rng_seed},
                  {"out", args.out}};
    echo_config("benchmark", resolved);

    const db::Dataset data = db::bench::ingest(args.data, args.label_col, args.time_col);
    const auto log = db::bench::run_benchmark(data, cfg);
    db::bench::save_log(log, args.out);

    std::size_t evaluated = 0, retrained = 0;
    for (const auto& row : log.rows) {
        if (!row.gap) ++evaluated;
        if (row.retrained) ++retrained;
    }
    std::cerr << "wrote log with " << log.rows.size() << " rows (" << evaluated << " evaluated, "
              << retrained << " retraining detections) to " << args.out << "\n";
    return 0;
}

struct ReportArgs {
    std::string log;
    std::string out_dir;
    std::size_t top_k = 5;
};

int run_report(ReportArgs& args) {
    echo_config("report",
                Json{{"log", args.log}, {"out_dir", args.out_dir}, {"top_k", args.top_k}});
    const auto log = db::bench::load_log(args.log);
    db::report::write_bundle(log, args.out_dir, args.top_k);
    std::cerr << "wrote report bundle to " << args.out_dir << "\n";
    return 0;
}

struct DetectArgs {
    std::string ref;
    std::string cur;
    std::string label_col = "label";
    std::string time_col = "ts";
    std::string weights;
    std::string test = "wasserstein";
    double alpha = 0.05;
    double tau = 0.05;
    double severity_threshold = 0.05;
    std::string severity_mode = "binary";
    std::string out;
};

int run_detect(DetectArgs& args) {
    const auto cfg = make_drift_config(args.test, args.alpha, args.tau, args.severity_threshold,
                                       args.severity_mode);
    echo_config("detect", Json{{"ref", args.ref},
                               {"cur", args.cur},
                               {"label_column", args.label_col},
                               {"time_column", args.time_col},
                               {"weights", args.weights.empty() ? "<uniform>" : args.weights},
                               {"drift", drift_config_json(args.test, cfg)},
                               {"out", args.out.empty() ? "<stdout>" : args.out}});

    const auto as_window = [](const db::Dataset& ds) {
        db::Window w;
        w.schema = ds.schema;
        w.samples = ds.samples;
        return w;
    };
    const db::Window ref = as_window(db::bench::ingest(args.ref, args.label_col, args.time_col));
    const db::Window cur = as_window(db::bench::ingest(args.cur, args.label_col, args.time_col));

    const auto weights = args.weights.empty() ? db::detector::uniform_weights(ref.schema)
                                              : db::detector::load_weights(args.weights);
    const auto report = db::detector::detect(ref, cur, weights, cfg);
    const std::string text = db::jsonio::report_to_json(report).dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(args.out);
        if (!out) throw std::runtime_error("cannot write report file: " + args.out);
        out << text;
        std::cerr << "wrote drift report to " << args.out << "\n";
    }
    return 0;
}

struct SplitArgs {
    std::string log;
    std::string data;
    std::string label_col = "label";
    std::string time_col = "ts";
    std::size_t min_drifts = 9;
    std::string out_prefix;
};

int run_split(SplitArgs& args) {
    echo_config("split", Json{{"log", args.log},
                              {"data", args.data},
                              {"label_column", args.label_col},
                              {"time_column", args.time_col},
                              {"min_drifts", args.min_drifts},
                              {"out_prefix", args.out_prefix}});

    const auto log = db::bench::load_log(args.log);
    const auto drifted_classes = db::report::classes_exceeding(log, args.min_drifts);
    if (drifted_classes.empty()) {
        throw std::runtime_error("no class exceeds " + std::to_string(args.min_drifts) +
                                 " drifts; nothing to split");
    }

    const db::Dataset data = db::bench::ingest(args.data, args.label_col, args.time_col);
    const db::Dataset drifted = db::bench::filter_classes(data, drifted_classes, true);
    const db::Dataset rest = db::bench::filter_classes(data, drifted_classes, false);

    const std::string drifted_path = args.out_prefix + "_drifted.csv";
    const std::string rest_path = args.out_prefix + "_rest.csv";
    db::bench::write_csv(drifted, drifted_path);
    db::bench::write_csv(rest, rest_path);

    std::cerr << "classes over threshold:";
    for (const auto& name : drifted_classes) std::cerr << " " << name;
    std::cerr << "\nwrote " << drifted.samples.size() << " samples to " << drifted_path << " and "
              << rest.samples.size() << " samples to " << rest_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dataset stability benchmarking toolkit"};
    app.set_version_flag("--version", std::string(db::kVersion));
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "write a synthetic labeled drift stream as CSV");
    gen->add_option("--pattern", gen_args.pattern, "drift pattern")
        ->check(CLI::IsMember({"none", "sudden", "gradual", "incremental", "recurring"}))
        ->capture_default_str();
    gen->add_option("--windows", gen_args.scenario.n_windows, "number of windows (one per day)")
        ->capture_default_str();
    gen->add_option("--samples-per-window", gen_args.scenario.samples_per_window,
                    "samples per window")
        ->capture_default_str();
    gen->add_option("--features", gen_args.scenario.n_features, "total feature count")
        ->capture_default_str();
    gen->add_option("--classes", gen_args.scenario.n_classes, "class count")
        ->capture_default_str();
    gen->add_option("--informative", gen_args.scenario.informative_features,
                    "features with class-dependent means")
        ->capture_default_str();
    gen->add_option("--drift-at", gen_args.scenario.drift_at, "first changed window")
        ->capture_default_str();
    gen->add_option("--transition-len", gen_args.scenario.transition_len,
                    "windows for gradual/incremental transitions")
        ->capture_default_str();
    gen->add_option("--period", gen_args.scenario.period, "windows per recurring phase")
        ->capture_default_str();
    gen->add_option("--magnitude", gen_args.scenario.magnitude, "mean shift in sigma units")
        ->capture_default_str();
    gen->add_option("--class-separation", gen_args.scenario.class_separation,
                    "distance between adjacent class means in sigma units")
        ->capture_default_str();
    gen->add_flag("--drift-noise-feature", gen_args.scenario.drift_noise_feature,
                  "apply the drift to the first noise feature instead of informative ones");
    gen->add_option("--seed", gen_args.scenario.seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_args.out, "output CSV path")->required();
    gen->callback([&gen_args] { run_generate(gen_args); });

    BenchmarkArgs bench_args;
    auto* bm = app.add_subcommand("benchmark", "run the dual-workflow drift benchmark");
    bm->add_option("--data", bench_args.data, "input CSV")->required();
    bm->add_option("--label-col", bench_args.label_col, "label column name")
        ->capture_default_str();
    bm->add_option("--time-col", bench_args.time_col, "time column name (empty = no timestamps)")
        ->capture_default_str();
    bm->add_option("--train-windows", bench_args.train_windows, "windows used for training")
        ->capture_default_str();
    bm->add_option("--window-by", bench_args.window_by, "count:<n> or time:<duration>")
        ->check(CLI::Validator(
            [](std::string& value) -> std::string {
                try {
                    db::bench::parse_window_mode(value);
                    return {};
                } catch (const std::exception& e) {
                    return e.what();
                }
            },
            "WINDOW_BY"))
        ->capture_default_str();
    bm->add_option("--test", bench_args.test, "per-feature two-sample test")
        ->check(CLI::IsMember({"ks", "wasserstein"}))
        ->capture_default_str();
    bm->add_option("--alpha", bench_args.alpha, "KS significance level")->capture_default_str();
    bm->add_option("--tau", bench_args.tau, "normalized Wasserstein threshold")
        ->capture_default_str();
    bm->add_option("--severity-threshold", bench_args.severity_threshold,
                   "weighted severity needed to declare drift")
        ->capture_default_str();
    bm->add_option("--severity-mode", bench_args.severity_mode, "per-feature severity form")
        ->check(CLI::IsMember({"binary", "statistic"}))
        ->capture_default_str();
    bm->add_option("--weighting", bench_args.weighting, "feature weighting scheme")
        ->check(CLI::IsMember({"weighted", "unweighted"}))
        ->capture_default_str();
    bm->add_option("--trees", bench_args.trees, "forest size")->capture_default_str();
    bm->add_option("--max-depth", bench_args.max_depth, "tree depth limit")
        ->capture_default_str();
    bm->add_option("--min-leaf", bench_args.min_leaf, "minimum samples per leaf")
        ->capture_default_str();
    bm->add_option("--seed", bench_args.seed, "run seed")->capture_default_str();
    bm->add_option("--out", bench_args.out, "output log JSON path")->required();
    bm->callback([&bench_args] { run_benchmark_cmd(bench_args); });

    ReportArgs report_args;
    auto* rep = app.add_subcommand("report", "turn a benchmark log into a report bundle");
    rep->add_option("--log", report_args.log, "benchmark log JSON")->required();
    rep->add_option("--out-dir", report_args.out_dir, "output directory")->required();
    rep->add_option("--top-k", report_args.top_k, "classes/features per ranking")
        ->capture_default_str();
    rep->callback([&report_args] { run_report(report_args); });

    DetectArgs detect_args;
    auto* det = app.add_subcommand("detect", "compare two CSV windows once");
    det->add_option("--ref", detect_args.ref, "reference CSV")->required();
    det->add_option("--cur", detect_args.cur, "current CSV")->required();
    det->add_option("--label-col", detect_args.label_col, "label column name")
        ->capture_default_str();
    det->add_option("--time-col", detect_args.time_col, "time column name (empty = no timestamps)")
        ->capture_default_str();
    det->add_option("--weights", detect_args.weights,
                    "feature weights JSON (omit for uniform weights)");
    det->add_option("--test", detect_args.test, "per-feature two-sample test")
        ->check(CLI::IsMember({"ks", "wasserstein"}))
        ->capture_default_str();
    det->add_option("--alpha", detect_args.alpha, "KS significance level")
        ->capture_default_str();
    det->add_option("--tau", detect_args.tau, "normalized Wasserstein threshold")
        ->capture_default_str();
    det->add_option("--severity-threshold", detect_args.severity_threshold,
                    "weighted severity needed to declare drift")
        ->capture_default_str();
    det->add_option("--severity-mode", detect_args.severity_mode, "per-feature severity form")
        ->check(CLI::IsMember({"binary", "statistic"}))
        ->capture_default_str();
    det->add_option("--out", detect_args.out, "report path (default stdout)");
    det->callback([&detect_args] { run_detect(detect_args); });

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "split a dataset by per-class drift counts");
    split->add_option("--log", split_args.log, "benchmark log JSON")->required();
    split->add_option("--data", split_args.data, "input CSV to split")->required();
    split->add_option("--label-col", split_args.label_col, "label column name")
        ->capture_default_str();
    split->add_option("--time-col", split_args.time_col,
                      "time column name (empty = no timestamps)")
        ->capture_default_str();
    split->add_option("--min-drifts", split_args.min_drifts,
                      "keep classes with strictly more drifts than this")
        ->capture_default_str();
    split->add_option("--out-prefix", split_args.out_prefix, "output path prefix")->required();
    split->callback([&split_args] { run_split(split_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
