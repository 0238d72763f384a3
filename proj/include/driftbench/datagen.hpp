#pragma once

#include <cstdint>
#include <string>

#include "driftbench/data.hpp"

namespace driftbench::datagen {

enum class DriftPattern { kNone, kSudden, kGradual, kIncremental, kRecurring };

// Synthetic labeled stream: Gaussian class-conditional features with unit
// sigma. Features f0..f{k-1} (k = informative_features) carry class-dependent
// means; the rest are class-independent noise. `magnitude` is the mean shift
// in sigma units. With drift_noise_feature set, the drift pattern moves the
// first noise feature instead of the informative ones.
struct DriftScenario {
    DriftPattern pattern = DriftPattern::kNone;
    std::size_t n_windows = 30;
    std::size_t samples_per_window = 2000;
    std::size_t n_features = 10;
    std::size_t n_classes = 4;
    std::size_t informative_features = 8;
    std::size_t drift_at = 15;
    std::size_t transition_len = 5;
    std::size_t period = 5;
    double magnitude = 3.0;
    double class_separation = 3.0;
    bool drift_noise_feature = false;
    std::uint64_t seed = 0;
};

// One window per synthetic day starting at 2022-01-01T00:00:00Z; epoch-second
// timestamps ascend within each day. Deterministic per scenario.
Dataset generate_stream(const DriftScenario& scenario);

std::string pattern_name(DriftPattern pattern);
DriftPattern pattern_from_name(const std::string& name);

std::string scenario_to_json(const DriftScenario& scenario);
DriftScenario scenario_from_json(const std::string& text);
void save_scenario(const DriftScenario& scenario, const std::string& path);
DriftScenario load_scenario(const std::string& path);

}  // namespace driftbench::datagen
