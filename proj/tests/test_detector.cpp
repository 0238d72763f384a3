#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "driftbench/data.hpp"
#include "driftbench/detector.hpp"

namespace {

using driftbench::Sample;
using driftbench::Window;
namespace det = driftbench::detector;

// Builds a labeled window from per-feature columns; all columns must share a
// length. Labels default to one class.
Window make_window(const std::vector<std::string>& schema,
                   const std::vector<std::vector<double>>& columns,
                   const std::vector<std::string>& labels = {}) {
    Window w;
    w.schema = schema;
    std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        Sample s;
        for (const auto& col : columns) s.features.push_back(col[r]);
        s.label = labels.empty() ? "c0" : labels[r];
        s.timestamp = double(r);
        w.samples.push_back(std::move(s));
    }
    return w;
}

std::vector<double> constant(std::size_t n, double v) { return std::vector<double>(n, v); }

std::vector<double> ramp(std::size_t n, double start, double step) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + step * double(i);
    return out;
}

}  // namespace

TEST_SUITE("detector") {

TEST_CASE("normalize_weights scales raw importances to sum one") {
    auto w1 = det::normalize_weights({{"f1", 2.0}, {"f2", 2.0}});
    CHECK(w1.entries.at("f1") == 0.5);
    CHECK(w1.entries.at("f2") == 0.5);
    CHECK_FALSE(w1.uniform_fallback);

    auto w2 = det::normalize_weights({{"f1", 1.0}, {"f2", 3.0}});
    CHECK(w2.entries.at("f1") == doctest::Approx(0.25));
    CHECK(w2.entries.at("f2") == doctest::Approx(0.75));

    auto w3 = det::normalize_weights({{"f1", 0.0}, {"f2", 0.0}});
    CHECK(w3.entries.at("f1") == 0.5);
    CHECK(w3.entries.at("f2") == 0.5);
    CHECK(w3.uniform_fallback);

    CHECK_THROWS(det::normalize_weights({}));
    CHECK_THROWS(det::normalize_weights({{"f1", -0.1}}));
}

TEST_CASE("feature_severity follows the configured test and mode") {
    det::DriftTestConfig ks_cfg;
    ks_cfg.test_kind = det::TestKind::kKs;

    auto same = det::feature_severity("f", ramp(50, 0, 0.1), ramp(50, 0, 0.1), ks_cfg);
    CHECK(same.severity == 0.0);

    auto disjoint = det::feature_severity("f", constant(100, 0.0), constant(100, 1.0), ks_cfg);
    CHECK(disjoint.severity == 1.0);
    CHECK(disjoint.outcome.drifted);

    det::DriftTestConfig wd_cfg;
    wd_cfg.test_kind = det::TestKind::kNormalizedWasserstein;
    wd_cfg.tau = 0.05;
    std::vector<double> ref, cur;
    for (int i = 0; i < 50; ++i) {
        ref.push_back(0.0);
        ref.push_back(2.0);
        cur.push_back(0.01);
        cur.push_back(2.01);
    }
    auto nudged = det::feature_severity("f", ref, cur, wd_cfg);
    CHECK(nudged.outcome.statistic == doctest::Approx(0.01));
    CHECK(nudged.severity == 0.0);

    CHECK_THROWS_WITH_AS(det::feature_severity("payload", {}, {1.0}, ks_cfg),
                         doctest::Contains("payload"), std::exception);
}

TEST_CASE("statistic severity mode caps at one") {
    det::DriftTestConfig cfg;
    cfg.test_kind = det::TestKind::kNormalizedWasserstein;
    cfg.severity_mode = det::SeverityMode::kStatistic;
    auto r = det::feature_severity("f", {0.0, 2.0}, {30.0, 32.0}, cfg);
    CHECK(r.outcome.statistic == doctest::Approx(30.0));
    CHECK(r.severity == 1.0);
}

TEST_CASE("detect aggregates severities by weight") {
    det::DriftTestConfig cfg;
    cfg.test_kind = det::TestKind::kKs;

    auto ref = make_window({"a", "b"}, {constant(100, 0.0), constant(100, 5.0)});

    SUBCASE("identical windows carry zero severity") {
        auto report = det::detect(ref, ref, det::uniform_weights(ref.schema), cfg);
        CHECK(report.overall_severity == 0.0);
        CHECK_FALSE(report.drifted);
        CHECK(report.share_drifted == 0.0);
        CHECK(report.scope == "global");
    }

    SUBCASE("full weight on the drifted feature yields severity one") {
        auto cur = make_window({"a", "b"}, {constant(100, 9.0), constant(100, 5.0)});
        det::FeatureWeights w;
        w.entries = {{"a", 1.0}, {"b", 0.0}};
        auto report = det::detect(ref, cur, w, cfg);
        CHECK(report.overall_severity == 1.0);
        CHECK(report.drifted);
        CHECK(report.share_drifted == 0.5);
    }

    SUBCASE("weights scale the drifted feature's contribution") {
        auto cur = make_window({"a", "b"}, {constant(100, 0.0), constant(100, 1.0)});
        det::FeatureWeights w;
        w.entries = {{"a", 0.8}, {"b", 0.2}};
        auto report = det::detect(ref, cur, w, cfg);
        CHECK(report.overall_severity == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(report.drifted);
    }
}

TEST_CASE("detect reports schema mismatches by name") {
    det::DriftTestConfig cfg;
    auto ref = make_window({"a", "b"}, {constant(5, 0.0), constant(5, 1.0)});
    auto cur = make_window({"a", "c"}, {constant(5, 0.0), constant(5, 1.0)});
    CHECK_THROWS_WITH_AS(det::detect(ref, cur, det::uniform_weights(ref.schema), cfg),
                         doctest::Contains("b"), std::exception);

    det::FeatureWeights partial;
    partial.entries = {{"a", 1.0}};
    CHECK_THROWS_WITH_AS(det::detect(ref, ref, partial, cfg), doctest::Contains("b"),
                         std::exception);
}

TEST_CASE("severity is invariant under feature permutation") {
    det::DriftTestConfig cfg;
    cfg.test_kind = det::TestKind::kKs;
    auto ref = make_window({"a", "b", "c"},
                           {ramp(80, 0, 0.1), ramp(80, 5, 0.05), constant(80, 1.0)});
    auto cur = make_window({"a", "b", "c"},
                           {ramp(80, 3, 0.1), ramp(80, 5, 0.05), constant(80, 1.0)});
    det::FeatureWeights w;
    w.entries = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
    auto direct = det::detect(ref, cur, w, cfg);

    auto ref_p = make_window({"c", "a", "b"},
                             {constant(80, 1.0), ramp(80, 0, 0.1), ramp(80, 5, 0.05)});
    auto cur_p = make_window({"c", "a", "b"},
                             {constant(80, 1.0), ramp(80, 3, 0.1), ramp(80, 5, 0.05)});
    auto permuted = det::detect(ref_p, cur_p, w, cfg);

    CHECK(direct.overall_severity == doctest::Approx(permuted.overall_severity).epsilon(1e-15));
    CHECK(direct.drifted == permuted.drifted);
    CHECK(direct.share_drifted == permuted.share_drifted);
}

TEST_CASE("raising the detection threshold never creates a detection") {
    auto ref = make_window({"a", "b"}, {constant(60, 0.0), constant(60, 1.0)});
    auto cur = make_window({"a", "b"}, {constant(60, 4.0), constant(60, 1.0)});
    auto w = det::uniform_weights(ref.schema);
    bool prev_drifted = true;
    for (double threshold : {0.01, 0.2, 0.4, 0.6, 0.9}) {
        det::DriftTestConfig cfg;
        cfg.test_kind = det::TestKind::kKs;
        cfg.severity_threshold = threshold;
        bool drifted = det::detect(ref, cur, w, cfg).drifted;
        CHECK((prev_drifted || !drifted));
        prev_drifted = drifted;
    }
}

TEST_CASE("a zero-weight feature cannot move the aggregate") {
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> base_ref(120), base_cur(120), wild(120);
        for (auto& v : base_ref) v = noise(gen);
        for (auto& v : base_cur) v = noise(gen);
        for (auto& v : wild) v = noise(gen) + 50.0;

        auto two_ref = make_window({"a", "z"}, {base_ref, base_ref});
        auto two_cur = make_window({"a", "z"}, {base_cur, wild});
        det::FeatureWeights w;
        w.entries = {{"a", 1.0}, {"z", 0.0}};

        auto one_ref = make_window({"a"}, {base_ref});
        auto one_cur = make_window({"a"}, {base_cur});
        det::FeatureWeights w_one;
        w_one.entries = {{"a", 1.0}};

        det::DriftTestConfig cfg;
        cfg.test_kind = det::TestKind::kKs;
        auto with_zero = det::detect(two_ref, two_cur, w, cfg);
        auto without = det::detect(one_ref, one_cur, w_one, cfg);
        CHECK(std::abs(with_zero.overall_severity - without.overall_severity) < 1e-12);
        CHECK(with_zero.drifted == without.drifted);
    }
}

TEST_CASE("uniform weights make severity equal the drifted share exactly") {
    std::mt19937_64 gen(99);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::string> schema{"f0", "f1", "f2", "f3", "f4", "f5", "f6"};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<double>> ref_cols, cur_cols;
        for (std::size_t f = 0; f < schema.size(); ++f) {
            std::vector<double> r(90), c(90);
            double shift = (gen() % 2 == 0) ? 6.0 : 0.0;
            for (auto& v : r) v = noise(gen);
            for (auto& v : c) v = noise(gen) + shift;
            ref_cols.push_back(r);
            cur_cols.push_back(c);
        }
        auto ref = make_window(schema, ref_cols);
        auto cur = make_window(schema, cur_cols);
        det::DriftTestConfig cfg;
        cfg.test_kind = det::TestKind::kKs;
        auto report = det::detect(ref, cur, det::uniform_weights(schema), cfg);
        CHECK(report.overall_severity == report.share_drifted);
    }
}

TEST_CASE("per-class detection tests each label separately with ks") {
    det::DriftTestConfig cfg;  // wasserstein by default; per-class must force ks
    std::mt19937_64 gen(7);
    std::normal_distribution<double> noise(0.0, 1.0);

    auto build = [&](double x_shift) {
        std::vector<std::vector<double>> cols(2, std::vector<double>(120));
        std::vector<std::string> labels(120);
        for (std::size_t i = 0; i < 120; ++i) {
            bool is_x = i % 2 == 0;
            labels[i] = is_x ? "x" : "y";
            cols[0][i] = noise(gen) + (is_x ? x_shift : 0.0);
            cols[1][i] = noise(gen);
        }
        return make_window({"a", "b"}, cols, labels);
    };

    auto ref = build(0.0);
    auto cur = build(10.0);
    auto by_class = det::detect_per_class(ref, cur, det::uniform_weights(ref.schema), cfg);

    REQUIRE(by_class.count("x") == 1);
    REQUIRE(by_class.count("y") == 1);
    CHECK_FALSE(by_class.at("x").absent);
    CHECK(by_class.at("x").report->drifted);
    CHECK(by_class.at("x").report->scope == "class:x");
    CHECK(by_class.at("x").report->per_feature.front().outcome.p_value.has_value());
    CHECK_FALSE(by_class.at("y").report->drifted);
}

TEST_CASE("per-class detection marks missing or thin classes absent") {
    det::DriftTestConfig cfg;
    auto ref = make_window({"a"}, {constant(20, 1.0)},
                           std::vector<std::string>(20, "x"));
    std::vector<std::string> cur_labels(20, "x");
    for (int i = 0; i < 4; ++i) cur_labels[i] = "y";  // below the minimum count
    std::vector<double> cur_col(20, 1.0);
    auto cur = make_window({"a"}, {cur_col}, cur_labels);

    auto by_class = det::detect_per_class(ref, cur, det::uniform_weights(ref.schema), cfg);
    REQUIRE(by_class.count("y") == 1);
    CHECK(by_class.at("y").absent);
    CHECK_FALSE(by_class.at("y").report.has_value());
    CHECK_FALSE(by_class.at("x").absent);
}

TEST_CASE("per-class detection reports identical classes as stable") {
    det::DriftTestConfig cfg;
    std::vector<std::string> labels;
    std::vector<double> col;
    for (int i = 0; i < 40; ++i) {
        labels.push_back(i % 2 == 0 ? "x" : "y");
        col.push_back(double(i % 7));
    }
    auto w = make_window({"a"}, {col}, labels);
    auto by_class = det::detect_per_class(w, w, det::uniform_weights(w.schema), cfg);
    for (const auto& [name, outcome] : by_class) {
        REQUIRE_FALSE(outcome.absent);
        CHECK(outcome.report->overall_severity == 0.0);
    }
}

TEST_CASE("per-class detection requires labels") {
    det::DriftTestConfig cfg;
    auto w = make_window({"a"}, {constant(10, 0.0)});
    for (auto& s : w.samples) s.label.clear();
    CHECK_THROWS(det::detect_per_class(w, w, det::uniform_weights(w.schema), cfg));
}

TEST_CASE("weights round-trip through the json file format") {
    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "driftbench_weights_test.json").string();
    det::FeatureWeights w;
    w.entries = {{"a", 0.25}, {"b", 0.75}};
    det::save_weights(w, path);
    auto loaded = det::load_weights(path);
    CHECK(loaded.entries.at("a") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(loaded.entries.at("b") == doctest::Approx(0.75).epsilon(1e-15));
    fs::remove(path);
}

}  // TEST_SUITE
