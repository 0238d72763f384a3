#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "driftbench/detector.hpp"
#include "driftbench/model.hpp"

namespace driftbench::jsonio {

using Json = nlohmann::ordered_json;

Json report_to_json(const detector::DriftReport& report);
detector::DriftReport report_from_json(const Json& j);

Json f1_to_json(const model::F1Breakdown& f1);
model::F1Breakdown f1_from_json(const Json& j);

Json class_map_to_json(const std::map<std::string, detector::ClassDriftOutcome>& entries);
std::map<std::string, detector::ClassDriftOutcome> class_map_from_json(const Json& j);

}  // namespace driftbench::jsonio
