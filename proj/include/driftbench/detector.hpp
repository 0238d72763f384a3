#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/data.hpp"
#include "driftbench/stats.hpp"

namespace driftbench::detector {

// Normalized per-feature importances, sum(weights) = 1.
struct FeatureWeights {
    std::map<std::string, double> entries;
    // All raw weights were zero; uniform 1/n weights were substituted.
    bool uniform_fallback = false;
};

enum class TestKind { kKs, kNormalizedWasserstein };
enum class SeverityMode { kBinary, kStatistic };

struct DriftTestConfig {
    TestKind test_kind = TestKind::kNormalizedWasserstein;
    double alpha = 0.05;              // per-feature KS significance
    double tau = 0.05;                // per-feature normalized-Wasserstein threshold
    double severity_threshold = 0.05; // weighted severity needed to declare drift
    SeverityMode severity_mode = SeverityMode::kBinary;
};

struct FeatureDriftResult {
    std::string feature;
    stats::TestOutcome outcome;
    double severity = 0.0;  // binary mode: {0,1}; statistic mode: min(statistic, 1)
    double weight = 0.0;
};

struct DriftReport {
    double overall_severity = 0.0;  // sum of weight * severity
    bool drifted = false;           // overall_severity >= severity_threshold
    double share_drifted = 0.0;     // unweighted fraction of rejecting features
    std::vector<FeatureDriftResult> per_feature;  // in schema order
    std::string scope = "global";   // "global" or "class:<name>"
};

// Per-class detection entry. `absent` marks a class missing from one of the
// windows or carrying fewer than kMinClassSamples samples in either.
struct ClassDriftOutcome {
    bool absent = false;
    std::optional<DriftReport> report;
};

// A class-level KS test on fewer points than this is not meaningful.
inline constexpr std::size_t kMinClassSamples = 5;

// Scale non-negative raw importances to sum to 1. An all-zero map falls back
// to uniform weights and sets the flag.
FeatureWeights normalize_weights(const std::map<std::string, double>& raw);

// Uniform 1/n weights over the given schema.
FeatureWeights uniform_weights(const std::vector<std::string>& schema);

// Run the configured test on one feature column pair and derive its severity.
FeatureDriftResult feature_severity(const std::string& feature,
                                    const stats::SampleVector& ref_col,
                                    const stats::SampleVector& cur_col,
                                    const DriftTestConfig& cfg,
                                    double weight = 0.0);

// Importance-weighted drift decision over all samples regardless of label.
DriftReport detect(const Window& ref_window, const Window& cur_window,
                   const FeatureWeights& weights, const DriftTestConfig& cfg);

// Class-level detection on ground-truth labels. Always uses the KS test;
// classes present (with enough samples) in only one window get an absent
// marker instead of a report.
std::map<std::string, ClassDriftOutcome> detect_per_class(const Window& ref_window,
                                                          const Window& cur_window,
                                                          const FeatureWeights& weights,
                                                          const DriftTestConfig& cfg);

// Flat JSON object feature-name -> weight; normalized on load.
FeatureWeights load_weights(const std::string& path);
void save_weights(const FeatureWeights& weights, const std::string& path);

}  // namespace driftbench::detector
