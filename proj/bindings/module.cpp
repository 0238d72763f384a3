#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "driftbench/bench.hpp"
#include "driftbench/datagen.hpp"
#include "driftbench/detector.hpp"
#include "driftbench/ingest.hpp"
#include "driftbench/json_io.hpp"
#include "driftbench/model.hpp"
#include "driftbench/report.hpp"
#include "driftbench/stats.hpp"
#include "driftbench/version.hpp"

namespace py = pybind11;
namespace db = driftbench;

namespace {

py::object json_text_to_py(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

db::Window dataset_window(const db::Dataset& ds) {
    db::Window w;
    w.schema = ds.schema;
    w.samples = ds.samples;
    return w;
}

db::detector::DriftTestConfig drift_config(const std::string& test, double alpha, double tau,
                                           double severity_threshold,
                                           const std::string& severity_mode) {
    db::detector::DriftTestConfig cfg;
    if (test == "ks") {
        cfg.test_kind = db::detector::TestKind::kKs;
    } else if (test == "wasserstein") {
        cfg.test_kind = db::detector::TestKind::kNormalizedWasserstein;
    } else {
        throw std::invalid_argument("test must be 'ks' or 'wasserstein'");
    }
    if (severity_mode == "binary") {
        cfg.severity_mode = db::detector::SeverityMode::kBinary;
    } else if (severity_mode == "statistic") {
        cfg.severity_mode = db::detector::SeverityMode::kStatistic;
    } else {
        throw std::invalid_argument("severity_mode must be 'binary' or 'statistic'");
    }
    cfg.alpha = alpha;
    cfg.tau = tau;
    cfg.severity_threshold = severity_threshold;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dataset stability benchmarking core";
    m.attr("__version__") = db::kVersion;

    py::class_<db::Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readonly("schema", &db::Dataset::schema)
        .def_readonly("label_column", &db::Dataset::label_column)
        .def_readonly("time_column", &db::Dataset::time_column)
        .def_readonly("has_timestamps", &db::Dataset::has_timestamps)
        .def("class_list", &db::Dataset::class_list)
        .def("__len__", [](const db::Dataset& ds) { return ds.samples.size(); })
        .def("labels",
             [](const db::Dataset& ds) {
                 std::vector<std::string> out;
                 out.reserve(ds.samples.size());
                 for (const auto& s : ds.samples) out.push_back(s.label);
                 return out;
             })
        .def("feature_matrix", [](const db::Dataset& ds) {
            std::vector<std::vector<double>> out;
            out.reserve(ds.samples.size());
            for (const auto& s : ds.samples) out.push_back(s.features);
            return out;
        });

    py::class_<db::datagen::DriftScenario>(m, "DriftScenario")
        .def(py::init<>())
        .def_property(
            "pattern",
            [](const db::datagen::DriftScenario& sc) { return db::datagen::pattern_name(sc.pattern); },
            [](db::datagen::DriftScenario& sc, const std::string& name) {
                sc.pattern = db::datagen::pattern_from_name(name);
            })
        .def_readwrite("n_windows", &db::datagen::DriftScenario::n_windows)
        .def_readwrite("samples_per_window", &db::datagen::DriftScenario::samples_per_window)
        .def_readwrite("n_features", &db::datagen::DriftScenario::n_features)
        .def_readwrite("n_classes", &db::datagen::DriftScenario::n_classes)
        .def_readwrite("informative_features", &db::datagen::DriftScenario::informative_features)
        .def_readwrite("drift_at", &db::datagen::DriftScenario::drift_at)
        .def_readwrite("transition_len", &db::datagen::DriftScenario::transition_len)
        .def_readwrite("period", &db::datagen::DriftScenario::period)
        .def_readwrite("magnitude", &db::datagen::DriftScenario::magnitude)
        .def_readwrite("class_separation", &db::datagen::DriftScenario::class_separation)
        .def_readwrite("drift_noise_feature", &db::datagen::DriftScenario::drift_noise_feature)
        .def_readwrite("seed", &db::datagen::DriftScenario::seed);

    m.def("generate_stream", &db::datagen::generate_stream, py::arg("scenario"));
    m.def("ingest", &db::bench::ingest, py::arg("path"), py::arg("label_column") = "label",
          py::arg("time_column") = "");
    m.def("write_csv", &db::bench::write_csv, py::arg("dataset"), py::arg("path"));

    m.def(
        "ks_two_sample",
        [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
            const auto outcome = db::stats::ks_two_sample(a, b, alpha);
            py::dict d;
            d["statistic"] = outcome.statistic;
            d["p_value"] = outcome.p_value ? py::object(py::float_(*outcome.p_value))
                                           : py::object(py::none());
            d["drifted"] = outcome.drifted;
            return d;
        },
        py::arg("reference"), py::arg("current"), py::arg("alpha") = 0.05);
    m.def("ks_p_value", &db::stats::ks_p_value, py::arg("statistic"), py::arg("n1"),
          py::arg("n2"));
    m.def("wasserstein_1d", &db::stats::wasserstein_1d, py::arg("reference"), py::arg("current"));
    m.def(
        "normalized_wasserstein",
        [](const std::vector<double>& a, const std::vector<double>& b, double tau) {
            const auto outcome = db::stats::normalized_wasserstein(a, b, tau);
            py::dict d;
            d["statistic"] = outcome.statistic;
            d["drifted"] = outcome.drifted;
            d["degenerate_scale"] = outcome.degenerate_scale;
            return d;
        },
        py::arg("reference"), py::arg("current"), py::arg("tau") = 0.05);

    m.def(
        "detect",
        [](const db::Dataset& reference, const db::Dataset& current, const py::object& weights,
           const std::string& test, double alpha, double tau, double severity_threshold,
           const std::string& severity_mode) {
            const db::Window ref = dataset_window(reference);
            const db::Window cur = dataset_window(current);
            const auto w = weights.is_none()
                               ? db::detector::uniform_weights(ref.schema)
                               : db::detector::normalize_weights(
                                     weights.cast<std::map<std::string, double>>());
            const auto cfg = drift_config(test, alpha, tau, severity_threshold, severity_mode);
            const auto report = db::detector::detect(ref, cur, w, cfg);
            return json_text_to_py(db::jsonio::report_to_json(report).dump());
        },
        py::arg("reference"), py::arg("current"), py::arg("weights") = py::none(),
        py::arg("test") = "wasserstein", py::arg("alpha") = 0.05, py::arg("tau") = 0.05,
        py::arg("severity_threshold") = 0.05, py::arg("severity_mode") = "binary");

    py::class_<db::model::TrainedModel>(m, "TrainedModel")
        .def_readonly("schema", &db::model::TrainedModel::schema)
        .def_readonly("classes", &db::model::TrainedModel::classes)
        .def("predict",
             [](const db::model::TrainedModel& model,
                const std::vector<std::vector<double>>& samples) {
                 return db::model::predict(model, samples);
             })
        .def("importances",
             [](const db::model::TrainedModel& model) {
                 return db::model::importances(model).entries;
             })
        .def("to_json", &db::model::model_to_json)
        .def_static("from_json", &db::model::model_from_json);

    m.def(
        "train",
        [](const db::Dataset& data, std::size_t tree_count, std::size_t max_depth,
           std::size_t min_leaf_size, std::uint64_t seed) {
            db::model::Hyperparams hp;
            hp.tree_count = tree_count;
            hp.max_depth = max_depth;
            hp.min_leaf_size = min_leaf_size;
            hp.rng_seed = seed;
            return db::model::train(dataset_window(data), hp);
        },
        py::arg("data"), py::arg("tree_count") = 50, py::arg("max_depth") = 12,
        py::arg("min_leaf_size") = 2, py::arg("seed") = 0);

    m.def(
        "f1_scores",
        [](const std::vector<std::string>& truth, const std::vector<std::string>& pred) {
            const auto f1 = db::model::f1_scores(truth, pred);
            py::dict d;
            d["macro_f1"] = f1.macro_f1;
            d["per_class"] = f1.per_class;
            return d;
        },
        py::arg("truth"), py::arg("pred"));

    m.def(
        "run_benchmark",
        [](const db::Dataset& data, std::size_t train_windows, const std::string& window_by,
           const std::string& test, double alpha, double tau, double severity_threshold,
           const std::string& severity_mode, bool weighted, std::size_t tree_count,
           std::size_t max_depth, std::size_t min_leaf_size, std::uint64_t seed) {
            db::bench::BenchmarkConfig cfg;
            cfg.train_windows = train_windows;
            cfg.window_mode = db::bench::parse_window_mode(window_by);
            cfg.drift = drift_config(test, alpha, tau, severity_threshold, severity_mode);
            cfg.weighted = weighted;
            cfg.hyperparams.tree_count = tree_count;
            cfg.hyperparams.max_depth = max_depth;
            cfg.hyperparams.min_leaf_size = min_leaf_size;
            cfg.hyperparams.rng_seed = seed;
            cfg.rng_seed = seed;
            return json_text_to_py(db::bench::log_to_json(db::bench::run_benchmark(data, cfg)));
        },
        py::arg("data"), py::arg("train_windows") = 7, py::arg("window_by") = "count:2000",
        py::arg("test") = "wasserstein", py::arg("alpha") = 0.05, py::arg("tau") = 0.05,
        py::arg("severity_threshold") = 0.05, py::arg("severity_mode") = "binary",
        py::arg("weighted") = true, py::arg("tree_count") = 50, py::arg("max_depth") = 12,
        py::arg("min_leaf_size") = 2, py::arg("seed") = 0);

    m.def(
        "run_benchmark_to_file",
        [](const db::Dataset& data, const std::string& out_path, std::size_t train_windows,
           const std::string& window_by, const std::string& test, double alpha, double tau,
           double severity_threshold, const std::string& severity_mode, bool weighted,
           std::size_t tree_count, std::size_t max_depth, std::size_t min_leaf_size,
           std::uint64_t seed) {
            db::bench::BenchmarkConfig cfg;
            cfg.train_windows = train_windows;
            cfg.window_mode = db::bench::parse_window_mode(window_by);
            cfg.drift = drift_config(test, alpha, tau, severity_threshold, severity_mode);
            cfg.weighted = weighted;
            cfg.hyperparams.tree_count = tree_count;
            cfg.hyperparams.max_depth = max_depth;
            cfg.hyperparams.min_leaf_size = min_leaf_size;
            cfg.hyperparams.rng_seed = seed;
            cfg.rng_seed = seed;
            db::bench::save_log(db::bench::run_benchmark(data, cfg), out_path);
        },
        py::arg("data"), py::arg("out_path"), py::arg("train_windows") = 7,
        py::arg("window_by") = "count:2000", py::arg("test") = "wasserstein",
        py::arg("alpha") = 0.05, py::arg("tau") = 0.05, py::arg("severity_threshold") = 0.05,
        py::arg("severity_mode") = "binary", py::arg("weighted") = true,
        py::arg("tree_count") = 50, py::arg("max_depth") = 12, py::arg("min_leaf_size") = 2,
        py::arg("seed") = 0);

    m.def(
        "write_report_bundle",
        [](const std::string& log_path, const std::string& out_dir, std::size_t top_k) {
            db::report::write_bundle(db::bench::load_log(log_path), out_dir, top_k);
        },
        py::arg("log_path"), py::arg("out_dir"), py::arg("top_k") = 5);
}
