#include "driftbench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "driftbench/rng.hpp"

namespace driftbench::datagen {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::int64_t kStreamEpoch = 1640995200;  // 2022-01-01T00:00:00Z
constexpr std::int64_t kDaySeconds = 86400;
// Setup streams (per-feature means) must never collide with per-window
// streams, whose indices are the window numbers.
constexpr std::uint64_t kSetupStream = 0x8000000000000000ULL;

void validate(const DriftScenario& sc) {
    if (sc.n_windows == 0 || sc.samples_per_window == 0 || sc.n_features == 0 ||
        sc.n_classes == 0) {
        throw std::invalid_argument("scenario counts must all be positive");
    }
    if (sc.informative_features == 0 || sc.informative_features > sc.n_features) {
        throw std::invalid_argument("informative_features must be in [1, n_features]");
    }
    if (sc.pattern != DriftPattern::kNone && sc.drift_at >= sc.n_windows) {
        throw std::invalid_argument("drift_at must be smaller than n_windows");
    }
    if (sc.magnitude < 0.0) throw std::invalid_argument("magnitude must be non-negative");
    if ((sc.pattern == DriftPattern::kGradual || sc.pattern == DriftPattern::kIncremental) &&
        sc.transition_len == 0) {
        throw std::invalid_argument("transition_len must be positive for this pattern");
    }
    if (sc.pattern == DriftPattern::kRecurring && sc.period == 0) {
        throw std::invalid_argument("period must be positive for the recurring pattern");
    }
    if (sc.drift_noise_feature && sc.informative_features == sc.n_features) {
        throw std::invalid_argument(
            "drift_noise_feature requires at least one non-informative feature");
    }
}

// Per-class base means. Informative features rank the classes by a seeded
// permutation scaled by class_separation; noise features share one
// class-independent mean.
std::vector<std::vector<double>> base_means(const DriftScenario& sc) {
    std::vector<std::vector<double>> means(sc.n_classes, std::vector<double>(sc.n_features));
    for (std::size_t f = 0; f < sc.n_features; ++f) {
        std::mt19937_64 gen(rng::derive_seed(sc.seed, kSetupStream + f));
        if (f < sc.informative_features) {
            std::vector<std::size_t> ranks(sc.n_classes);
            for (std::size_t c = 0; c < ranks.size(); ++c) ranks[c] = c;
            for (std::size_t i = 0; i + 1 < ranks.size(); ++i) {
                std::swap(ranks[i], ranks[i + rng::bounded(gen, ranks.size() - i)]);
            }
            for (std::size_t c = 0; c < sc.n_classes; ++c) {
                means[c][f] = sc.class_separation * static_cast<double>(ranks[c]);
            }
        } else {
            std::normal_distribution<double> normal(0.0, 1.0);
            const double shared = normal(gen);
            for (std::size_t c = 0; c < sc.n_classes; ++c) means[c][f] = shared;
        }
    }
    return means;
}

// Fraction of the drift shift applied in window w (before any per-sample
// gradual coin flip): 0 = old concept, 1 = fully shifted.
double concept_level(const DriftScenario& sc, std::size_t w) {
    if (sc.pattern == DriftPattern::kNone || w < sc.drift_at) return 0.0;
    const auto since = w - sc.drift_at;
    switch (sc.pattern) {
        case DriftPattern::kSudden:
            return 1.0;
        case DriftPattern::kIncremental:
            return std::min(1.0, static_cast<double>(since + 1) /
                                     static_cast<double>(sc.transition_len));
        case DriftPattern::kRecurring:
            return (since / sc.period) % 2 == 0 ? 1.0 : 0.0;
        case DriftPattern::kGradual:
            return 1.0;  // applied per sample via the ramp probability
        default:
            return 0.0;
    }
}

double gradual_probability(const DriftScenario& sc, std::size_t w) {
    if (w < sc.drift_at) return 0.0;
    return std::min(1.0, static_cast<double>(w - sc.drift_at + 1) /
                             static_cast<double>(sc.transition_len));
}

}  // namespace

Dataset generate_stream(const DriftScenario& sc) {
    validate(sc);

    Dataset ds;
    ds.has_timestamps = true;
    ds.time_format = "epoch";
    ds.time_column = "ts";
    for (std::size_t f = 0; f < sc.n_features; ++f) ds.schema.push_back("f" + std::to_string(f));

    const auto means = base_means(sc);
    const std::size_t drifted_feature_begin = sc.drift_noise_feature ? sc.informative_features : 0;
    const std::size_t drifted_feature_end =
        sc.drift_noise_feature ? sc.informative_features + 1 : sc.informative_features;

    ds.samples.reserve(sc.n_windows * sc.samples_per_window);
    for (std::size_t w = 0; w < sc.n_windows; ++w) {
        std::mt19937_64 gen(rng::derive_seed(sc.seed, w));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> coin(0.0, 1.0);

        // Uniform class priors within one sample: spread the remainder over
        // the first (samples_per_window % n_classes) classes, then shuffle.
        std::vector<std::size_t> classes;
        classes.reserve(sc.samples_per_window);
        for (std::size_t i = 0; i < sc.samples_per_window; ++i) classes.push_back(i % sc.n_classes);
        for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
            std::swap(classes[i], classes[i + rng::bounded(gen, classes.size() - i)]);
        }

        const double level = concept_level(sc, w);
        const double ramp = gradual_probability(sc, w);
        const std::int64_t day_start = kStreamEpoch + static_cast<std::int64_t>(w) * kDaySeconds;

        for (std::size_t i = 0; i < sc.samples_per_window; ++i) {
            double shift_fraction = level;
            if (sc.pattern == DriftPattern::kGradual) {
                shift_fraction = coin(gen) < ramp ? 1.0 : 0.0;
            }

            Sample s;
            s.label = "c" + std::to_string(classes[i]);
            s.timestamp = static_cast<double>(
                day_start + static_cast<std::int64_t>(i * static_cast<std::size_t>(kDaySeconds) /
                                                      sc.samples_per_window));
            s.features.resize(sc.n_features);
            for (std::size_t f = 0; f < sc.n_features; ++f) {
                double mean = means[classes[i]][f];
                if (f >= drifted_feature_begin && f < drifted_feature_end) {
                    mean += shift_fraction * sc.magnitude;
                }
                s.features[f] = mean + normal(gen);
            }
            ds.samples.push_back(std::move(s));
        }
    }
    return ds;
}

std::string pattern_name(DriftPattern pattern) {
    switch (pattern) {
        case DriftPattern::kNone: return "none";
        case DriftPattern::kSudden: return "sudden";
        case DriftPattern::kGradual: return "gradual";
        case DriftPattern::kIncremental: return "incremental";
        case DriftPattern::kRecurring: return "recurring";
    }
    throw std::logic_error("unreachable pattern value");
}

DriftPattern pattern_from_name(const std::string& name) {
    if (name == "none") return DriftPattern::kNone;
    if (name == "sudden") return DriftPattern::kSudden;
    if (name == "gradual") return DriftPattern::kGradual;
    if (name == "incremental") return DriftPattern::kIncremental;
    if (name == "recurring") return DriftPattern::kRecurring;
    throw std::invalid_argument("unknown drift pattern: " + name);
}

std::string scenario_to_json(const DriftScenario& sc) {
    Json j;
    j["pattern"] = pattern_name(sc.pattern);
    j["n_windows"] = sc.n_windows;
    j["samples_per_window"] = sc.samples_per_window;
    j["n_features"] = sc.n_features;
    j["n_classes"] = sc.n_classes;
    j["informative_features"] = sc.informative_features;
    j["drift_at"] = sc.drift_at;
    j["transition_len"] = sc.transition_len;
    j["period"] = sc.period;
    j["magnitude"] = sc.magnitude;
    j["class_separation"] = sc.class_separation;
    j["drift_noise_feature"] = sc.drift_noise_feature;
    j["seed"] = sc.seed;
    return j.dump(2) + "\n";
}

DriftScenario scenario_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("invalid scenario JSON: ") + e.what());
    }
    try {
        DriftScenario sc;
        sc.pattern = pattern_from_name(j.at("pattern").get<std::string>());
        sc.n_windows = j.at("n_windows").get<std::size_t>();
        sc.samples_per_window = j.at("samples_per_window").get<std::size_t>();
        sc.n_features = j.at("n_features").get<std::size_t>();
        sc.n_classes = j.at("n_classes").get<std::size_t>();
        sc.informative_features = j.at("informative_features").get<std::size_t>();
        sc.drift_at = j.at("drift_at").get<std::size_t>();
        sc.transition_len = j.at("transition_len").get<std::size_t>();
        sc.period = j.at("period").get<std::size_t>();
        sc.magnitude = j.at("magnitude").get<double>();
        sc.class_separation = j.at("class_separation").get<double>();
        sc.drift_noise_feature = j.at("drift_noise_feature").get<bool>();
        sc.seed = j.at("seed").get<std::uint64_t>();
        return sc;
    } catch (const Json::exception& e) {
        throw std::runtime_error(std::string("invalid scenario JSON: ") + e.what());
    }
}

void save_scenario(const DriftScenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_json(scenario);
}

DriftScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace driftbench::datagen
