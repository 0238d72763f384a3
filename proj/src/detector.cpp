#include "driftbench/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace driftbench::detector {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

// Ensure the weight key set equals the window schema.
void check_weight_coverage(const FeatureWeights& weights,
                           const std::vector<std::string>& schema) {
    std::vector<std::string> missing, extra;
    const std::set<std::string> schema_set(schema.begin(), schema.end());
    for (const auto& name : schema) {
        if (!weights.entries.count(name)) missing.push_back(name);
    }
    for (const auto& [name, _] : weights.entries) {
        if (!schema_set.count(name)) extra.push_back(name);
    }
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream msg;
        msg << "weights do not match feature schema";
        if (!missing.empty()) msg << "; missing: " << join(missing);
        if (!extra.empty()) msg << "; extra: " << join(extra);
        throw std::invalid_argument(msg.str());
    }
}

void check_same_schema(const Window& ref, const Window& cur) {
    if (ref.schema == cur.schema) return;
    std::vector<std::string> missing, extra;
    const std::set<std::string> ref_set(ref.schema.begin(), ref.schema.end());
    const std::set<std::string> cur_set(cur.schema.begin(), cur.schema.end());
    for (const auto& name : ref.schema) {
        if (!cur_set.count(name)) missing.push_back(name);
    }
    for (const auto& name : cur.schema) {
        if (!ref_set.count(name)) extra.push_back(name);
    }
    std::ostringstream msg;
    msg << "window schema mismatch";
    if (!missing.empty()) msg << "; missing: " << join(missing);
    if (!extra.empty()) msg << "; extra: " << join(extra);
    if (missing.empty() && extra.empty()) msg << "; feature order differs";
    throw std::invalid_argument(msg.str());
}

// Aggregate per-feature results into a report. Equal weights use the pooled
// sum(s)/n form so the severity matches share_drifted exactly.
DriftReport assemble(std::vector<FeatureDriftResult> results, const DriftTestConfig& cfg,
                     std::string scope) {
    DriftReport report;
    report.scope = std::move(scope);
    report.per_feature = std::move(results);

    const auto n = static_cast<double>(report.per_feature.size());
    bool equal_weights = true;
    for (const auto& r : report.per_feature) {
        if (r.weight != report.per_feature.front().weight) {
            equal_weights = false;
            break;
        }
    }

    double severity = 0.0;
    std::size_t rejected = 0;
    if (equal_weights && !report.per_feature.empty()) {
        // Normalized equal weights are each 1/n, so the weighted sum reduces
        // to the mean severity. Computing it as sum/n keeps binary-mode
        // severity identical to share_drifted.
        double sum = 0.0;
        for (const auto& r : report.per_feature) sum += r.severity;
        severity = sum / n;
    } else {
        for (const auto& r : report.per_feature) severity += r.weight * r.severity;
    }
    for (const auto& r : report.per_feature) {
        if (r.outcome.drifted) ++rejected;
    }

    report.overall_severity = severity;
    report.drifted = severity >= cfg.severity_threshold;
    report.share_drifted = static_cast<double>(rejected) / n;
    return report;
}

DriftReport detect_on_columns(const Window& ref, const Window& cur,
                              const FeatureWeights& weights, const DriftTestConfig& cfg,
                              const std::string& scope, const std::string& class_filter) {
    std::vector<FeatureDriftResult> results;
    results.reserve(ref.schema.size());
    for (std::size_t i = 0; i < ref.schema.size(); ++i) {
        const auto& name = ref.schema[i];
        const auto ref_col = class_filter.empty() ? ref.column(i)
                                                  : ref.column_for_class(i, class_filter);
        const auto cur_col = class_filter.empty() ? cur.column(i)
                                                  : cur.column_for_class(i, class_filter);
        results.push_back(
            feature_severity(name, ref_col, cur_col, cfg, weights.entries.at(name)));
    }
    return assemble(std::move(results), cfg, scope);
}

}  // namespace

FeatureWeights normalize_weights(const std::map<std::string, double>& raw) {
    if (raw.empty()) throw std::invalid_argument("cannot normalize an empty weight map");

    double total = 0.0;
    for (const auto& [name, value] : raw) {
        if (value < 0.0 || !std::isfinite(value)) {
            throw std::invalid_argument("negative or non-finite weight for feature '" + name + "'");
        }
        total += value;
    }

    FeatureWeights out;
    if (total == 0.0) {
        const double uniform = 1.0 / static_cast<double>(raw.size());
        for (const auto& [name, _] : raw) out.entries[name] = uniform;
        out.uniform_fallback = true;
        return out;
    }
    for (const auto& [name, value] : raw) out.entries[name] = value / total;
    return out;
}

FeatureWeights uniform_weights(const std::vector<std::string>& schema) {
    if (schema.empty()) throw std::invalid_argument("cannot build weights for an empty schema");
    FeatureWeights out;
    const double uniform = 1.0 / static_cast<double>(schema.size());
    for (const auto& name : schema) out.entries[name] = uniform;
    return out;
}

FeatureDriftResult feature_severity(const std::string& feature,
                                    const stats::SampleVector& ref_col,
                                    const stats::SampleVector& cur_col,
                                    const DriftTestConfig& cfg, double weight) {
    if (ref_col.empty() || cur_col.empty()) {
        throw std::invalid_argument("empty column for feature '" + feature + "'");
    }

    FeatureDriftResult result;
    result.feature = feature;
    result.weight = weight;
    result.outcome = cfg.test_kind == TestKind::kKs
                         ? stats::ks_two_sample(ref_col, cur_col, cfg.alpha)
                         : stats::normalized_wasserstein(ref_col, cur_col, cfg.tau);
    result.severity = cfg.severity_mode == SeverityMode::kBinary
                          ? (result.outcome.drifted ? 1.0 : 0.0)
                          : std::min(result.outcome.statistic, 1.0);
    return result;
}

DriftReport detect(const Window& ref_window, const Window& cur_window,
                   const FeatureWeights& weights, const DriftTestConfig& cfg) {
    check_same_schema(ref_window, cur_window);
    check_weight_coverage(weights, ref_window.schema);
    return detect_on_columns(ref_window, cur_window, weights, cfg, "global", "");
}

std::map<std::string, ClassDriftOutcome> detect_per_class(const Window& ref_window,
                                                          const Window& cur_window,
                                                          const FeatureWeights& weights,
                                                          const DriftTestConfig& cfg) {
    check_same_schema(ref_window, cur_window);
    check_weight_coverage(weights, ref_window.schema);
    if (!ref_window.labeled() || !cur_window.labeled()) {
        throw std::invalid_argument("per-class detection requires labeled windows");
    }

    // Class-level comparisons run on sub-thousand sample counts, where the KS
    // test is the configured choice regardless of the global test kind.
    DriftTestConfig class_cfg = cfg;
    class_cfg.test_kind = TestKind::kKs;

    std::map<std::string, std::size_t> ref_counts, cur_counts;
    for (const auto& s : ref_window.samples) ++ref_counts[s.label];
    for (const auto& s : cur_window.samples) ++cur_counts[s.label];

    std::set<std::string> labels;
    for (const auto& [label, _] : ref_counts) labels.insert(label);
    for (const auto& [label, _] : cur_counts) labels.insert(label);

    std::map<std::string, ClassDriftOutcome> out;
    for (const auto& label : labels) {
        ClassDriftOutcome entry;
        const auto ref_it = ref_counts.find(label);
        const auto cur_it = cur_counts.find(label);
        const bool enough = ref_it != ref_counts.end() && cur_it != cur_counts.end() &&
                            ref_it->second >= kMinClassSamples &&
                            cur_it->second >= kMinClassSamples;
        if (!enough) {
            entry.absent = true;
        } else {
            entry.report = detect_on_columns(ref_window, cur_window, weights, class_cfg,
                                             "class:" + label, label);
        }
        out.emplace(label, std::move(entry));
    }
    return out;
}

FeatureWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weights file: " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("invalid weights JSON in " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("weights file must hold a JSON object");

    std::map<std::string, double> raw;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) {
            throw std::runtime_error("weight for feature '" + key + "' is not a number");
        }
        raw[key] = value.get<double>();
    }
    return normalize_weights(raw);
}

void save_weights(const FeatureWeights& weights, const std::string& path) {
    Json doc = Json::object();
    for (const auto& [name, value] : weights.entries) doc[name] = value;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write weights file: " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace driftbench::detector
