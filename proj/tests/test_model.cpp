#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "driftbench/data.hpp"
#include "driftbench/datagen.hpp"
#include "driftbench/model.hpp"

namespace {

using driftbench::Dataset;
using driftbench::Sample;
using driftbench::Window;
namespace mdl = driftbench::model;
namespace dg = driftbench::datagen;

Window dataset_window(const Dataset& ds) {
    Window w;
    w.schema = ds.schema;
    w.samples = ds.samples;
    return w;
}

std::vector<std::vector<double>> feature_matrix(const Window& w) {
    std::vector<std::vector<double>> out;
    for (const auto& s : w.samples) out.push_back(s.features);
    return out;
}

std::vector<std::string> labels_of(const Window& w) {
    std::vector<std::string> out;
    for (const auto& s : w.samples) out.push_back(s.label);
    return out;
}

Window blob_window() {
    dg::DriftScenario sc;
    sc.pattern = dg::DriftPattern::kNone;
    sc.n_windows = 1;
    sc.samples_per_window = 400;
    sc.n_features = 4;
    sc.n_classes = 2;
    sc.informative_features = 4;
    sc.drift_at = 0;
    sc.class_separation = 8.0;
    sc.seed = 1;
    return dataset_window(dg::generate_stream(sc));
}

bool same_tree(const mdl::Tree& a, const mdl::Tree& b) {
    if (a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const auto& x = a.nodes[i];
        const auto& y = b.nodes[i];
        if (x.leaf != y.leaf || x.feature != y.feature || x.threshold != y.threshold ||
            x.left != y.left || x.right != y.right || x.probs != y.probs)
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("well-separated blobs train to a perfect fit") {
    auto w = blob_window();
    mdl::Hyperparams hp;
    hp.rng_seed = 1;
    auto model = mdl::train(w, hp);
    auto pred = mdl::predict(model, feature_matrix(w));
    auto f1 = mdl::f1_scores(labels_of(w), pred);
    CHECK(f1.macro_f1 == 1.0);
}

TEST_CASE("a single-class window trains a constant predictor") {
    Window w;
    w.schema = {"a", "b"};
    std::mt19937_64 gen(3);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        w.samples.push_back({{noise(gen), noise(gen)}, "only", double(i)});
    }
    mdl::Hyperparams hp;
    auto model = mdl::train(w, hp);
    auto pred = mdl::predict(model, {{0.0, 0.0}, {100.0, -100.0}});
    CHECK(pred == std::vector<std::string>{"only", "only"});

    auto weights = mdl::importances(model);
    CHECK(weights.uniform_fallback);
    CHECK(weights.entries.at("a") == 0.5);
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto w = blob_window();
    mdl::Hyperparams hp;
    hp.tree_count = 10;
    hp.rng_seed = 17;
    auto a = mdl::train(w, hp);
    auto b = mdl::train(w, hp);
    CHECK(mdl::model_to_json(a) == mdl::model_to_json(b));

    hp.rng_seed = 18;
    auto c = mdl::train(w, hp);
    CHECK(mdl::model_to_json(a) != mdl::model_to_json(c));
}

TEST_CASE("bootstrap draws depend only on seed and tree index") {
    auto idx_a = mdl::bootstrap_indices(42, 3, 500);
    auto idx_b = mdl::bootstrap_indices(42, 3, 500);
    CHECK(idx_a == idx_b);
    CHECK(idx_a.size() == 500);
    CHECK(*std::max_element(idx_a.begin(), idx_a.end()) < 500);
    CHECK(mdl::bootstrap_indices(42, 4, 500) != idx_a);
    CHECK_THROWS(mdl::bootstrap_indices(42, 0, 0));
}

TEST_CASE("permuting rows with compensating indices grows the same tree") {
    auto w = blob_window();
    const std::size_t n = w.samples.size();
    auto indices = mdl::bootstrap_indices(7, 0, n);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(11);
    std::shuffle(perm.begin(), perm.end(), gen);

    Window permuted;
    permuted.schema = w.schema;
    permuted.samples.resize(n);
    std::vector<std::size_t> inverse(n);
    for (std::size_t i = 0; i < n; ++i) {
        permuted.samples[i] = w.samples[perm[i]];
        inverse[perm[i]] = i;
    }
    std::vector<std::size_t> compensated;
    for (auto idx : indices) compensated.push_back(inverse[idx]);

    auto classes = std::vector<std::string>{"c0", "c1"};
    mdl::Hyperparams hp;
    std::map<std::string, double> acc_a, acc_b;
    auto tree_a = mdl::grow_tree(w, classes, indices, hp, 1234, acc_a);
    auto tree_b = mdl::grow_tree(permuted, classes, compensated, hp, 1234, acc_b);
    CHECK(same_tree(tree_a, tree_b));
    CHECK(acc_a == acc_b);
}

TEST_CASE("importances concentrate on the informative feature") {
    dg::DriftScenario sc;
    sc.pattern = dg::DriftPattern::kNone;
    sc.n_windows = 1;
    sc.samples_per_window = 600;
    sc.n_features = 2;
    sc.n_classes = 2;
    sc.informative_features = 1;
    sc.drift_at = 0;
    sc.class_separation = 6.0;
    sc.seed = 5;
    auto w = dataset_window(dg::generate_stream(sc));

    mdl::Hyperparams hp;
    hp.rng_seed = 5;
    auto model = mdl::train(w, hp);
    auto weights = mdl::importances(model);
    CHECK(weights.entries.at("f0") > 0.9);
    double total = 0.0;
    for (const auto& [name, v] : weights.entries) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("predict handles edge inputs") {
    auto w = blob_window();
    mdl::Hyperparams hp;
    hp.tree_count = 5;
    auto model = mdl::train(w, hp);
    CHECK(mdl::predict(model, {}).empty());
    CHECK_THROWS(mdl::predict(model, {{1.0, 2.0}}));  // schema has 4 features
}

TEST_CASE("train validates its inputs") {
    mdl::Hyperparams hp;
    Window empty_labels;
    empty_labels.schema = {"a"};
    empty_labels.samples = {{{1.0}, "", 0}, {{2.0}, "", 1}};
    CHECK_THROWS(mdl::train(empty_labels, hp));

    Window single;
    single.schema = {"a"};
    single.samples = {{{1.0}, "x", 0}};
    CHECK_THROWS(mdl::train(single, hp));

    Window ok;
    ok.schema = {"a"};
    ok.samples = {{{1.0}, "x", 0}, {{2.0}, "y", 1}};
    mdl::Hyperparams bad = hp;
    bad.tree_count = 0;
    CHECK_THROWS(mdl::train(ok, bad));
}

TEST_CASE("f1 breakdown on a hand-checked confusion matrix") {
    auto f1 = mdl::f1_scores({"a", "a", "b", "b"}, {"a", "b", "b", "b"});
    CHECK(f1.per_class.at("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1.per_class.at("b") == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(f1.macro_f1 == doctest::Approx((2.0 / 3.0 + 0.8) / 2.0).epsilon(1e-12));
}

TEST_CASE("f1 extremes and validation") {
    CHECK(mdl::f1_scores({"a", "b"}, {"a", "b"}).macro_f1 == 1.0);
    CHECK(mdl::f1_scores({"a", "a", "b", "b"}, {"b", "b", "a", "a"}).macro_f1 == 0.0);
    CHECK_THROWS(mdl::f1_scores({"a"}, {"a", "b"}));
    CHECK_THROWS(mdl::f1_scores({}, {}));
}

TEST_CASE("macro f1 averages only classes present in the truth") {
    // "c" appears only in predictions; it gets a per-class entry but no
    // weight in the macro mean.
    auto f1 = mdl::f1_scores({"a", "a", "b"}, {"a", "c", "b"});
    CHECK(f1.per_class.count("c") == 1);
    CHECK(f1.per_class.at("c") == 0.0);
    double a = f1.per_class.at("a");
    double b = f1.per_class.at("b");
    CHECK(f1.macro_f1 == doctest::Approx((a + b) / 2.0).epsilon(1e-12));
}

TEST_CASE("model json round-trips bit-exactly") {
    auto w = blob_window();
    mdl::Hyperparams hp;
    hp.tree_count = 8;
    hp.rng_seed = 23;
    auto model = mdl::train(w, hp);
    auto text = mdl::model_to_json(model);
    auto restored = mdl::model_from_json(text);
    CHECK(mdl::model_to_json(restored) == text);

    auto pred_a = mdl::predict(model, feature_matrix(w));
    auto pred_b = mdl::predict(restored, feature_matrix(w));
    CHECK(pred_a == pred_b);

    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "driftbench_model_test.json").string();
    mdl::save_model(model, path);
    auto from_file = mdl::load_model(path);
    CHECK(mdl::model_to_json(from_file) == text);
    fs::remove(path);
}

TEST_CASE("model json rejects foreign documents") {
    CHECK_THROWS(mdl::model_from_json("{}"));
    CHECK_THROWS(mdl::model_from_json("not json"));
    CHECK_THROWS(mdl::model_from_json(R"({"format":"other","version":1})"));
}

}  // TEST_SUITE
