#include "driftbench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "driftbench/json_io.hpp"
#include "driftbench/rng.hpp"
#include "driftbench/version.hpp"

namespace driftbench::bench {

namespace {

using Json = nlohmann::ordered_json;
using jsonio::class_map_from_json;
using jsonio::class_map_to_json;
using jsonio::f1_from_json;
using jsonio::f1_to_json;
using jsonio::report_from_json;
using jsonio::report_to_json;

constexpr std::size_t kMaxWindows = 1000000;

std::string test_kind_name(detector::TestKind kind) {
    return kind == detector::TestKind::kKs ? "ks" : "normalized_wasserstein";
}

detector::TestKind test_kind_from(const std::string& name) {
    if (name == "ks") return detector::TestKind::kKs;
    if (name == "normalized_wasserstein") return detector::TestKind::kNormalizedWasserstein;
    throw std::runtime_error("unknown test kind: " + name);
}

std::string severity_mode_name(detector::SeverityMode mode) {
    return mode == detector::SeverityMode::kBinary ? "binary" : "statistic";
}

detector::SeverityMode severity_mode_from(const std::string& name) {
    if (name == "binary") return detector::SeverityMode::kBinary;
    if (name == "statistic") return detector::SeverityMode::kStatistic;
    throw std::runtime_error("unknown severity mode: " + name);
}

Json config_to_json(const BenchmarkConfig& cfg) {
    Json j;
    j["train_windows"] = cfg.train_windows;
    if (cfg.window_mode.kind == WindowMode::Kind::kByCount) {
        j["window_mode"] = {{"kind", "by_count"}, {"count", cfg.window_mode.count}};
    } else {
        j["window_mode"] = {{"kind", "by_time"},
                            {"duration_seconds", cfg.window_mode.duration_seconds}};
    }
    j["drift"] = {{"test_kind", test_kind_name(cfg.drift.test_kind)},
                  {"alpha", cfg.drift.alpha},
                  {"tau", cfg.drift.tau},
                  {"severity_threshold", cfg.drift.severity_threshold},
                  {"severity_mode", severity_mode_name(cfg.drift.severity_mode)}};
    j["weighting"] = cfg.weighted ? "weighted" : "unweighted";
    j["hyperparams"] = {{"tree_count", cfg.hyperparams.tree_count},
                        {"max_depth", cfg.hyperparams.max_depth},
                        {"min_leaf_size", cfg.hyperparams.min_leaf_size}};
    j["rng_seed"] = cfg.rng_seed;
    return j;
}

BenchmarkConfig config_from_json(const Json& j) {
    BenchmarkConfig cfg;
    cfg.train_windows = j.at("train_windows").get<std::size_t>();
    const auto& wm = j.at("window_mode");
    const std::string kind = wm.at("kind").get<std::string>();
    if (kind == "by_count") {
        cfg.window_mode.kind = WindowMode::Kind::kByCount;
        cfg.window_mode.count = wm.at("count").get<std::size_t>();
    } else if (kind == "by_time") {
        cfg.window_mode.kind = WindowMode::Kind::kByTime;
        cfg.window_mode.duration_seconds = wm.at("duration_seconds").get<std::int64_t>();
    } else {
        throw std::runtime_error("unknown window mode: " + kind);
    }
    const auto& drift = j.at("drift");
    cfg.drift.test_kind = test_kind_from(drift.at("test_kind").get<std::string>());
    cfg.drift.alpha = drift.at("alpha").get<double>();
    cfg.drift.tau = drift.at("tau").get<double>();
    cfg.drift.severity_threshold = drift.at("severity_threshold").get<double>();
    cfg.drift.severity_mode = severity_mode_from(drift.at("severity_mode").get<std::string>());
    const std::string weighting = j.at("weighting").get<std::string>();
    if (weighting != "weighted" && weighting != "unweighted") {
        throw std::runtime_error("unknown weighting: " + weighting);
    }
    cfg.weighted = weighting == "weighted";
    const auto& hp = j.at("hyperparams");
    cfg.hyperparams.tree_count = hp.at("tree_count").get<std::size_t>();
    cfg.hyperparams.max_depth = hp.at("max_depth").get<std::size_t>();
    cfg.hyperparams.min_leaf_size = hp.at("min_leaf_size").get<std::size_t>();
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    cfg.hyperparams.rng_seed = cfg.rng_seed;
    return cfg;
}

void check_same_schema(const Window& a, const Window& b) {
    if (a.schema != b.schema) throw std::invalid_argument("window schema mismatch");
}

std::int64_t parse_duration_seconds(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty duration");
    std::int64_t multiplier = 1;
    std::string digits = text;
    switch (text.back()) {
        case 'd': multiplier = 86400; digits.pop_back(); break;
        case 'h': multiplier = 3600; digits.pop_back(); break;
        case 'm': multiplier = 60; digits.pop_back(); break;
        case 's': multiplier = 1; digits.pop_back(); break;
        default: break;
    }
    if (digits.empty()) throw std::invalid_argument("invalid duration: " + text);
    for (const char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("invalid duration: " + text);
    }
    const std::int64_t value = std::stoll(digits) * multiplier;
    if (value <= 0) throw std::invalid_argument("duration must be positive: " + text);
    return value;
}

}  // namespace

WindowMode parse_window_mode(const std::string& text) {
    WindowMode mode;
    if (text.rfind("count:", 0) == 0) {
        mode.kind = WindowMode::Kind::kByCount;
        const std::string n = text.substr(6);
        if (n.empty()) throw std::invalid_argument("invalid window count: " + text);
        for (const char c : n) {
            if (c < '0' || c > '9') throw std::invalid_argument("invalid window count: " + text);
        }
        mode.count = static_cast<std::size_t>(std::stoull(n));
        if (mode.count == 0) throw std::invalid_argument("window count must be positive");
        return mode;
    }
    if (text.rfind("time:", 0) == 0) {
        mode.kind = WindowMode::Kind::kByTime;
        mode.duration_seconds = parse_duration_seconds(text.substr(5));
        return mode;
    }
    throw std::invalid_argument("window mode must be count:<n> or time:<duration>: " + text);
}

std::vector<Window> make_windows(const std::vector<Sample>& samples,
                                 const std::vector<std::string>& schema, const WindowMode& mode,
                                 bool has_timestamps) {
    if (samples.empty()) throw std::invalid_argument("cannot window an empty sample list");

    std::vector<Window> windows;
    if (mode.kind == WindowMode::Kind::kByCount) {
        if (mode.count == 0) throw std::invalid_argument("window sample count must be positive");
        for (std::size_t offset = 0; offset < samples.size(); offset += mode.count) {
            Window w;
            w.id = static_cast<int>(windows.size());
            w.schema = schema;
            const std::size_t end = std::min(offset + mode.count, samples.size());
            w.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(offset),
                             samples.begin() + static_cast<std::ptrdiff_t>(end));
            w.partial = w.samples.size() < mode.count;
            windows.push_back(std::move(w));
        }
        return windows;
    }

    if (mode.duration_seconds <= 0) throw std::invalid_argument("window duration must be positive");
    if (!has_timestamps) {
        throw std::invalid_argument("time-based windowing requires a time column");
    }

    double min_ts = samples.front().timestamp;
    double max_ts = samples.front().timestamp;
    for (const auto& s : samples) {
        min_ts = std::min(min_ts, s.timestamp);
        max_ts = std::max(max_ts, s.timestamp);
    }

    const auto duration = static_cast<double>(mode.duration_seconds);
    const double start0 = std::floor(min_ts / duration) * duration;
    const auto n_windows =
        static_cast<std::size_t>(std::floor((max_ts - start0) / duration)) + 1;
    if (n_windows > kMaxWindows) {
        throw std::invalid_argument("window duration produces more than " +
                                    std::to_string(kMaxWindows) + " windows");
    }

    windows.resize(n_windows);
    for (std::size_t k = 0; k < n_windows; ++k) {
        windows[k].id = static_cast<int>(k);
        windows[k].schema = schema;
        windows[k].has_time_range = true;
        windows[k].start = start0 + static_cast<double>(k) * duration;
        windows[k].end = start0 + static_cast<double>(k + 1) * duration;
    }
    for (const auto& s : samples) {
        auto k = static_cast<std::size_t>(std::floor((s.timestamp - start0) / duration));
        k = std::min(k, n_windows - 1);
        windows[k].samples.push_back(s);
    }
    return windows;
}

Window update_reference(const Window& ref_window, const Window& new_window) {
    check_same_schema(ref_window, new_window);
    const std::size_t ref_n = ref_window.size();
    const std::size_t take = std::min(new_window.size(), ref_n);

    Window out;
    out.id = ref_window.id;
    out.schema = ref_window.schema;
    out.samples.reserve(ref_n);
    out.samples.insert(out.samples.end(),
                       ref_window.samples.begin() + static_cast<std::ptrdiff_t>(take),
                       ref_window.samples.end());
    out.samples.insert(out.samples.end(),
                       new_window.samples.end() - static_cast<std::ptrdiff_t>(take),
                       new_window.samples.end());
    return out;
}

BenchmarkLog run_benchmark(const Dataset& dataset, const BenchmarkConfig& cfg) {
    if (cfg.train_windows == 0) throw std::invalid_argument("training needs at least one window");

    const auto windows =
        make_windows(dataset.samples, dataset.schema, cfg.window_mode, dataset.has_timestamps);
    if (windows.size() <= cfg.train_windows) {
        throw std::invalid_argument("dataset spans " + std::to_string(windows.size()) +
                                    " windows; need more than the " +
                                    std::to_string(cfg.train_windows) + " training windows");
    }

    Window training;
    training.id = 0;
    training.schema = dataset.schema;
    for (std::size_t i = 0; i < cfg.train_windows; ++i) {
        training.samples.insert(training.samples.end(), windows[i].samples.begin(),
                                windows[i].samples.end());
    }
    std::set<std::string> training_classes;
    for (const auto& s : training.samples) training_classes.insert(s.label);
    if (training_classes.size() < 2) {
        throw std::invalid_argument("training windows contain fewer than 2 classes");
    }

    model::Hyperparams hp = cfg.hyperparams;
    hp.rng_seed = cfg.rng_seed;
    const auto ml_ref = model::train(training, hp);
    auto ml_retrain = ml_ref;

    const auto weights_initial = cfg.weighted ? model::importances(ml_ref)
                                              : detector::uniform_weights(dataset.schema);
    auto weights_current = weights_initial;

    BenchmarkLog log;
    log.config = cfg;
    log.config.hyperparams.rng_seed = cfg.rng_seed;
    log.schema = dataset.schema;
    log.classes = dataset.class_list();
    log.tool_version = kVersion;
    log.time_format = dataset.time_format;
    log.initial_weights = weights_initial;

    Window reference = training;
    std::size_t retrain_count = 0;

    for (std::size_t i = cfg.train_windows; i < windows.size(); ++i) {
        const Window& w = windows[i];
        LogRow row;
        row.window_id = w.id;
        if (w.empty()) {
            row.gap = true;
            log.rows.push_back(std::move(row));
            continue;
        }

        std::vector<std::vector<double>> x;
        std::vector<std::string> truth;
        x.reserve(w.size());
        truth.reserve(w.size());
        for (const auto& s : w.samples) {
            x.push_back(s.features);
            truth.push_back(s.label);
        }

        row.f1_ref = model::f1_scores(truth, model::predict(ml_ref, x));
        row.f1_retrain = model::f1_scores(truth, model::predict(ml_retrain, x));
        row.report_ref = detector::detect(training, w, weights_initial, cfg.drift);
        row.report_retrain = detector::detect(reference, w, weights_current, cfg.drift);
        row.per_class_ref = detector::detect_per_class(training, w, weights_initial, cfg.drift);
        row.per_class_retrain =
            detector::detect_per_class(reference, w, weights_current, cfg.drift);

        row.retrained = row.report_retrain->drifted;
        if (row.retrained) {
            reference = update_reference(reference, w);
            model::Hyperparams retrain_hp = cfg.hyperparams;
            retrain_hp.rng_seed = rng::derive_seed(cfg.rng_seed, ++retrain_count);
            ml_retrain = model::train(reference, retrain_hp);
            if (cfg.weighted) weights_current = model::importances(ml_retrain);
        }
        log.rows.push_back(std::move(row));
    }
    return log;
}

Dataset filter_classes(const Dataset& dataset, const std::vector<std::string>& class_list,
                       bool keep) {
    if (class_list.empty()) throw std::invalid_argument("class list is empty");
    const std::set<std::string> listed(class_list.begin(), class_list.end());

    Dataset out = dataset;
    out.samples.clear();
    bool any_hit = false;
    for (const auto& s : dataset.samples) {
        const bool in_list = listed.count(s.label) > 0;
        if (in_list) any_hit = true;
        if (in_list == keep) out.samples.push_back(s);
    }
    if (!any_hit) throw std::invalid_argument("class list is disjoint from the dataset");
    return out;
}

std::string log_to_json(const BenchmarkLog& log) {
    Json doc;
    doc["log_version"] = 1;
    Json header;
    header["tool_version"] = log.tool_version;
    header["config"] = config_to_json(log.config);
    header["schema"] = log.schema;
    header["classes"] = log.classes;
    header["time_format"] = log.time_format;
    header["initial_weights"] = log.initial_weights.entries;
    doc["header"] = std::move(header);

    Json rows = Json::array();
    for (const auto& row : log.rows) {
        Json r;
        r["window_id"] = row.window_id;
        r["gap"] = row.gap;
        r["f1_ref"] = row.f1_ref ? f1_to_json(*row.f1_ref) : Json(nullptr);
        r["f1_retrain"] = row.f1_retrain ? f1_to_json(*row.f1_retrain) : Json(nullptr);
        r["report_ref"] = row.report_ref ? report_to_json(*row.report_ref) : Json(nullptr);
        r["report_retrain"] =
            row.report_retrain ? report_to_json(*row.report_retrain) : Json(nullptr);
        r["retrained"] = row.retrained;
        r["per_class_reports"] = Json{{"ref", class_map_to_json(row.per_class_ref)},
                                      {"retrain", class_map_to_json(row.per_class_retrain)}};
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

BenchmarkLog log_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("invalid log JSON: ") + e.what());
    }
    try {
        if (doc.at("log_version").get<int>() != 1) {
            throw std::runtime_error("unsupported log version");
        }
        BenchmarkLog log;
        const auto& header = doc.at("header");
        log.tool_version = header.at("tool_version").get<std::string>();
        log.config = config_from_json(header.at("config"));
        log.schema = header.at("schema").get<std::vector<std::string>>();
        log.classes = header.at("classes").get<std::vector<std::string>>();
        log.time_format = header.at("time_format").get<std::string>();
        log.initial_weights.entries =
            header.at("initial_weights").get<std::map<std::string, double>>();

        for (const auto& r : doc.at("rows")) {
            LogRow row;
            row.window_id = r.at("window_id").get<int>();
            row.gap = r.at("gap").get<bool>();
            if (!r.at("f1_ref").is_null()) row.f1_ref = f1_from_json(r.at("f1_ref"));
            if (!r.at("f1_retrain").is_null()) row.f1_retrain = f1_from_json(r.at("f1_retrain"));
            if (!r.at("report_ref").is_null()) {
                row.report_ref = report_from_json(r.at("report_ref"));
            }
            if (!r.at("report_retrain").is_null()) {
                row.report_retrain = report_from_json(r.at("report_retrain"));
            }
            row.retrained = r.at("retrained").get<bool>();
            const auto& pc = r.at("per_class_reports");
            row.per_class_ref = class_map_from_json(pc.at("ref"));
            row.per_class_retrain = class_map_from_json(pc.at("retrain"));
            log.rows.push_back(std::move(row));
        }
        return log;
    } catch (const Json::exception& e) {
        throw std::runtime_error(std::string("invalid log JSON: ") + e.what());
    }
}

void save_log(const BenchmarkLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write log file: " + path);
    out << log_to_json(log);
}

BenchmarkLog load_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return log_from_json(buf.str());
}

}  // namespace driftbench::bench
