#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/bench.hpp"

namespace driftbench::report {

// Table-style rollup of one workflow's evaluated (non-gap) rows.
struct WorkflowSummary {
    std::size_t drift_detection_count = 0;
    double drift_strength_mean = 0.0;
    double share_drifted_features_mean = 0.0;
    double f1_mean = 0.0;
};

struct GlobalSummary {
    WorkflowSummary reference;
    WorkflowSummary retraining;
};

// Per-class analysis series, aligned with the evaluated rows. Null entries
// mark windows where the class was absent; they are excluded from counts,
// means, and correlations. Series come from the reference workflow, whose
// comparisons against the original training window keep drift strength on a
// fixed baseline.
struct ClassSeries {
    std::string class_name;
    std::vector<std::optional<double>> drift_strengths;
    std::vector<std::optional<double>> f1;
    std::size_t drift_count = 0;
    double mean_strength = 0.0;
    std::optional<double> f1_drift_correlation;
};

struct FeatureSeries {
    std::string feature;
    std::vector<double> severities;
    std::vector<double> statistics;
    std::size_t drift_count = 0;
    double mean_severity = 0.0;
};

GlobalSummary summarize(const bench::BenchmarkLog& log);

// Classes ranked by drift count desc, mean strength desc, name asc.
std::vector<ClassSeries> top_drifted_classes(const bench::BenchmarkLog& log, std::size_t k = 5);

// Features ranked by drift count desc, mean severity desc, name asc.
std::vector<FeatureSeries> top_drifted_features(const bench::BenchmarkLog& log,
                                                std::size_t k = 5);

// Pearson correlation between each class's drift-strength and F1 series,
// sorted ascending (most negative first). Classes with fewer than 3 paired
// points or a zero-variance series are skipped.
std::vector<std::pair<std::string, double>> correlated_classes(const bench::BenchmarkLog& log,
                                                               std::size_t k = 5);

// Name-sorted classes whose drift count strictly exceeds min_drifts.
std::vector<std::string> classes_exceeding(const bench::BenchmarkLog& log,
                                           std::size_t min_drifts);

// Self-contained deterministic SVG chart. `which` selects the series:
// "global", "class:<name>", or "feature:<name>". Left axis carries F1 for
// global and class charts; the right axis carries drift severity with a
// horizontal line at the severity threshold. Vertical markers sit on
// retraining rows for the global chart and on reference-workflow detections
// for class and feature charts.
std::string render_svg(const bench::BenchmarkLog& log, const std::string& which);

// Writes summary.json, per_class.json, per_feature.json, global.svg, and one
// SVG per top-k class and feature into out_dir.
void write_bundle(const bench::BenchmarkLog& log, const std::string& out_dir,
                  std::size_t top_k = 5);

}  // namespace driftbench::report
