#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/data.hpp"
#include "driftbench/detector.hpp"
#include "driftbench/model.hpp"

namespace driftbench::bench {

struct WindowMode {
    enum class Kind { kByCount, kByTime } kind = Kind::kByCount;
    std::size_t count = 2000;          // by_count: samples per window
    std::int64_t duration_seconds = 0; // by_time: window length
};

struct BenchmarkConfig {
    std::size_t train_windows = 7;
    WindowMode window_mode;
    detector::DriftTestConfig drift;
    bool weighted = true;
    model::Hyperparams hyperparams;
    std::uint64_t rng_seed = 0;
};

// One evaluated window. Gap rows (empty source window) keep null metrics so
// the timeline stays contiguous.
struct LogRow {
    int window_id = 0;
    bool gap = false;
    std::optional<model::F1Breakdown> f1_ref;
    std::optional<model::F1Breakdown> f1_retrain;
    std::optional<detector::DriftReport> report_ref;
    std::optional<detector::DriftReport> report_retrain;
    bool retrained = false;
    std::map<std::string, detector::ClassDriftOutcome> per_class_ref;
    std::map<std::string, detector::ClassDriftOutcome> per_class_retrain;
};

struct BenchmarkLog {
    BenchmarkConfig config;
    std::vector<std::string> schema;
    std::vector<std::string> classes;
    std::string tool_version;
    std::string time_format;
    detector::FeatureWeights initial_weights;
    std::vector<LogRow> rows;
};

// Parses "count:<n>" or "time:<duration>" (integer seconds, or an integer
// with a d/h/m/s suffix) into a WindowMode.
WindowMode parse_window_mode(const std::string& text);

// Splits a sample stream into contiguous windows. by_count keeps a trailing
// partial window; by_time aligns boundaries to multiples of the duration in
// UTC and emits empty gap windows for spans with no samples.
std::vector<Window> make_windows(const std::vector<Sample>& samples,
                                 const std::vector<std::string>& schema, const WindowMode& mode,
                                 bool has_timestamps);

// Rolls the reference window forward: drops the oldest min(|new|,|ref|)
// samples and appends new_window's samples (newest |ref| of them if larger).
// The result always has the original reference size.
Window update_reference(const Window& ref_window, const Window& new_window);

BenchmarkLog run_benchmark(const Dataset& dataset, const BenchmarkConfig& cfg);

// Keeps (keep=true) or drops (keep=false) the samples whose label is in
// class_list.
Dataset filter_classes(const Dataset& dataset, const std::vector<std::string>& class_list,
                       bool keep);

std::string log_to_json(const BenchmarkLog& log);
BenchmarkLog log_from_json(const std::string& text);
void save_log(const BenchmarkLog& log, const std::string& path);
BenchmarkLog load_log(const std::string& path);

}  // namespace driftbench::bench
