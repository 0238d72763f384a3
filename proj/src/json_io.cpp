#include "driftbench/json_io.hpp"

namespace driftbench::jsonio {

Json report_to_json(const detector::DriftReport& report) {
    Json j;
    j["scope"] = report.scope;
    j["overall_severity"] = report.overall_severity;
    j["drifted"] = report.drifted;
    j["share_drifted"] = report.share_drifted;
    Json features = Json::array();
    for (const auto& r : report.per_feature) {
        Json f;
        f["feature"] = r.feature;
        f["statistic"] = r.outcome.statistic;
        f["p_value"] = r.outcome.p_value ? Json(*r.outcome.p_value) : Json(nullptr);
        f["drifted"] = r.outcome.drifted;
        f["degenerate_scale"] = r.outcome.degenerate_scale;
        f["severity"] = r.severity;
        f["weight"] = r.weight;
        features.push_back(std::move(f));
    }
    j["per_feature"] = std::move(features);
    return j;
}

detector::DriftReport report_from_json(const Json& j) {
    detector::DriftReport report;
    report.scope = j.at("scope").get<std::string>();
    report.overall_severity = j.at("overall_severity").get<double>();
    report.drifted = j.at("drifted").get<bool>();
    report.share_drifted = j.at("share_drifted").get<double>();
    for (const auto& f : j.at("per_feature")) {
        detector::FeatureDriftResult r;
        r.feature = f.at("feature").get<std::string>();
        r.outcome.statistic = f.at("statistic").get<double>();
        if (!f.at("p_value").is_null()) r.outcome.p_value = f.at("p_value").get<double>();
        r.outcome.drifted = f.at("drifted").get<bool>();
        r.outcome.degenerate_scale = f.at("degenerate_scale").get<bool>();
        r.severity = f.at("severity").get<double>();
        r.weight = f.at("weight").get<double>();
        report.per_feature.push_back(std::move(r));
    }
    return report;
}

Json f1_to_json(const model::F1Breakdown& f1) {
    Json j;
    j["macro_f1"] = f1.macro_f1;
    j["per_class"] = f1.per_class;
    return j;
}

model::F1Breakdown f1_from_json(const Json& j) {
    model::F1Breakdown f1;
    f1.macro_f1 = j.at("macro_f1").get<double>();
    f1.per_class = j.at("per_class").get<std::map<std::string, double>>();
    return f1;
}

Json class_map_to_json(const std::map<std::string, detector::ClassDriftOutcome>& entries) {
    Json j = Json::object();
    for (const auto& [name, outcome] : entries) {
        if (outcome.absent) {
            j[name] = Json{{"absent", true}};
        } else {
            j[name] = report_to_json(*outcome.report);
        }
    }
    return j;
}

std::map<std::string, detector::ClassDriftOutcome> class_map_from_json(const Json& j) {
    std::map<std::string, detector::ClassDriftOutcome> out;
    for (const auto& [name, value] : j.items()) {
        detector::ClassDriftOutcome outcome;
        if (value.contains("absent") && value.at("absent").get<bool>()) {
            outcome.absent = true;
        } else {
            outcome.report = report_from_json(value);
        }
        out.emplace(name, std::move(outcome));
    }
    return out;
}

}  // namespace driftbench::jsonio
