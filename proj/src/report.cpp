#include "driftbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace driftbench::report {

namespace {

using Json = nlohmann::ordered_json;
using bench::BenchmarkLog;
using bench::LogRow;

std::vector<const LogRow*> evaluated_rows(const BenchmarkLog& log) {
    std::vector<const LogRow*> rows;
    for (const auto& row : log.rows) {
        if (!row.gap) rows.push_back(&row);
    }
    return rows;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 3) return std::nullopt;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<ClassSeries> build_class_series(const BenchmarkLog& log) {
    const auto rows = evaluated_rows(log);
    std::set<std::string> names;
    for (const auto* row : rows) {
        for (const auto& [name, _] : row->per_class_ref) names.insert(name);
    }

    std::vector<ClassSeries> out;
    for (const auto& name : names) {
        ClassSeries series;
        series.class_name = name;
        series.drift_strengths.reserve(rows.size());
        series.f1.reserve(rows.size());
        for (const auto* row : rows) {
            std::optional<double> strength;
            const auto it = row->per_class_ref.find(name);
            if (it != row->per_class_ref.end() && !it->second.absent) {
                strength = it->second.report->overall_severity;
                if (it->second.report->drifted) ++series.drift_count;
            }
            series.drift_strengths.push_back(strength);

            std::optional<double> f1;
            if (row->f1_ref) {
                const auto f1_it = row->f1_ref->per_class.find(name);
                if (f1_it != row->f1_ref->per_class.end()) f1 = f1_it->second;
            }
            series.f1.push_back(f1);
        }

        double sum = 0.0;
        std::size_t n = 0;
        std::vector<double> paired_strength, paired_f1;
        for (std::size_t i = 0; i < series.drift_strengths.size(); ++i) {
            if (series.drift_strengths[i]) {
                sum += *series.drift_strengths[i];
                ++n;
            }
            if (series.drift_strengths[i] && series.f1[i]) {
                paired_strength.push_back(*series.drift_strengths[i]);
                paired_f1.push_back(*series.f1[i]);
            }
        }
        series.mean_strength = n > 0 ? sum / static_cast<double>(n) : 0.0;
        series.f1_drift_correlation = pearson(paired_strength, paired_f1);
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<FeatureSeries> build_feature_series(const BenchmarkLog& log) {
    const auto rows = evaluated_rows(log);
    std::vector<FeatureSeries> out;
    for (std::size_t f = 0; f < log.schema.size(); ++f) {
        FeatureSeries series;
        series.feature = log.schema[f];
        for (const auto* row : rows) {
            if (!row->report_ref || f >= row->report_ref->per_feature.size() ||
                row->report_ref->per_feature[f].feature != series.feature) {
                throw std::runtime_error("log row feature order differs from the schema");
            }
            const auto& result = row->report_ref->per_feature[f];
            series.severities.push_back(result.severity);
            series.statistics.push_back(result.outcome.statistic);
            if (result.outcome.drifted) ++series.drift_count;
        }
        double sum = 0.0;
        for (const double s : series.severities) sum += s;
        series.mean_severity =
            series.severities.empty() ? 0.0 : sum / static_cast<double>(series.severities.size());
        out.push_back(std::move(series));
    }
    return out;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string fmt_tick(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", value);
    return buf;
}

struct SeriesDef {
    std::string name;
    std::string color;
    bool left_axis = true;
    std::vector<std::optional<double>> values;
};

struct ChartSpec {
    std::string title;
    std::vector<SeriesDef> series;
    std::vector<std::size_t> markers;  // positions in the charted row sequence
    std::vector<int> window_ids;
    double threshold = 0.0;
};

std::string render_chart(const ChartSpec& spec) {
    constexpr double kWidth = 900.0, kHeight = 360.0;
    constexpr double kLeft = 60.0, kRight = 840.0, kTop = 46.0, kBottom = 316.0;
    const double plot_w = kRight - kLeft;
    const double plot_h = kBottom - kTop;
    const std::size_t n = spec.window_ids.size();

    double right_max = spec.threshold;
    for (const auto& s : spec.series) {
        if (s.left_axis) continue;
        for (const auto& v : s.values) {
            if (v) right_max = std::max(right_max, *v);
        }
    }
    right_max = std::max(right_max * 1.1, 1e-9);
    const double left_max = 1.05;

    const auto x_at = [&](std::size_t i) {
        if (n <= 1) return kLeft + plot_w / 2.0;
        return kLeft + static_cast<double>(i) * plot_w / static_cast<double>(n - 1);
    };
    const auto y_left = [&](double v) { return kBottom - v / left_max * plot_h; };
    const auto y_right = [&](double v) { return kBottom - v / right_max * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"360\" "
           "viewBox=\"0 0 900 360\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"360\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           escape_xml(spec.title) + "</text>\n";

    // Frame and axes.
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double frac = static_cast<double>(t) / 4.0;
        const double y = kBottom - frac * plot_h;
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" fill=\"#444444\">" + fmt_tick(frac * left_max) + "</text>\n";
        svg += "<text x=\"" + fmt(kRight + 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"start\" fill=\"#444444\">" + fmt_tick(frac * right_max) +
               "</text>\n";
    }
    const std::size_t x_step = n > 10 ? (n + 9) / 10 : 1;
    for (std::size_t i = 0; i < n; i += x_step) {
        svg += "<text x=\"" + fmt(x_at(i)) + "\" y=\"" + fmt(kBottom + 16) +
               "\" text-anchor=\"middle\" fill=\"#444444\">" +
               std::to_string(spec.window_ids[i]) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight - 10) +
           "\" text-anchor=\"middle\" fill=\"#444444\">window</text>\n";

    // Detection markers under the data lines.
    for (const std::size_t i : spec.markers) {
        svg += "<line class=\"detection\" x1=\"" + fmt(x_at(i)) + "\" y1=\"" + fmt(kTop) +
               "\" x2=\"" + fmt(x_at(i)) + "\" y2=\"" + fmt(kBottom) +
               "\" stroke=\"#999999\" stroke-dasharray=\"3,3\"/>\n";
    }

    // Severity threshold on the right axis.
    svg += "<line class=\"threshold\" x1=\"" + fmt(kLeft) + "\" y1=\"" +
           fmt(y_right(spec.threshold)) + "\" x2=\"" + fmt(kRight) + "\" y2=\"" +
           fmt(y_right(spec.threshold)) + "\" stroke=\"#bb4444\" stroke-dasharray=\"6,3\"/>\n";

    // Data series; null gaps split a series into separate polylines.
    for (const auto& s : spec.series) {
        std::vector<std::pair<double, double>> run;
        const auto flush = [&]() {
            if (run.size() == 1) {
                svg += "<circle cx=\"" + fmt(run[0].first) + "\" cy=\"" + fmt(run[0].second) +
                       "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
            } else if (run.size() > 1) {
                svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t p = 0; p < run.size(); ++p) {
                    if (p > 0) svg += ' ';
                    svg += fmt(run[p].first) + "," + fmt(run[p].second);
                }
                svg += "\"/>\n";
            }
            run.clear();
        };
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!s.values[i]) {
                flush();
                continue;
            }
            const double y = s.left_axis ? y_left(*s.values[i]) : y_right(*s.values[i]);
            run.emplace_back(x_at(i), y);
        }
        flush();
    }

    // Legend.
    double lx = kLeft + 6;
    for (const auto& s : spec.series) {
        svg += "<rect x=\"" + fmt(lx) + "\" y=\"30\" width=\"10\" height=\"10\" fill=\"" +
               s.color + "\"/>\n";
        svg += "<text x=\"" + fmt(lx + 14) + "\" y=\"39\" fill=\"#333333\">" +
               escape_xml(s.name) + "</text>\n";
        lx += 14.0 + 7.0 * static_cast<double>(s.name.size()) + 16.0;
    }

    svg += "</svg>\n";
    return svg;
}

std::vector<std::optional<double>> boxed(const std::vector<double>& values) {
    std::vector<std::optional<double>> out;
    out.reserve(values.size());
    for (const double v : values) out.emplace_back(v);
    return out;
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

Json optional_to_json(const std::optional<double>& value) {
    return value ? Json(*value) : Json(nullptr);
}

Json series_to_json(const std::vector<std::optional<double>>& values) {
    Json arr = Json::array();
    for (const auto& v : values) arr.push_back(optional_to_json(v));
    return arr;
}

}  // namespace

GlobalSummary summarize(const BenchmarkLog& log) {
    const auto rows = evaluated_rows(log);
    if (rows.empty()) throw std::runtime_error("log has no evaluated rows");

    GlobalSummary s;
    for (const auto* row : rows) {
        if (row->report_ref->drifted) ++s.reference.drift_detection_count;
        s.reference.drift_strength_mean += row->report_ref->overall_severity;
        s.reference.share_drifted_features_mean += row->report_ref->share_drifted;
        s.reference.f1_mean += row->f1_ref->macro_f1;

        if (row->retrained) ++s.retraining.drift_detection_count;
        s.retraining.drift_strength_mean += row->report_retrain->overall_severity;
        s.retraining.share_drifted_features_mean += row->report_retrain->share_drifted;
        s.retraining.f1_mean += row->f1_retrain->macro_f1;
    }
    const auto n = static_cast<double>(rows.size());
    s.reference.drift_strength_mean /= n;
    s.reference.share_drifted_features_mean /= n;
    s.reference.f1_mean /= n;
    s.retraining.drift_strength_mean /= n;
    s.retraining.share_drifted_features_mean /= n;
    s.retraining.f1_mean /= n;
    return s;
}

std::vector<ClassSeries> top_drifted_classes(const BenchmarkLog& log, std::size_t k) {
    auto series = build_class_series(log);
    if (series.empty()) throw std::runtime_error("log has no per-class data");
    std::sort(series.begin(), series.end(), [](const ClassSeries& a, const ClassSeries& b) {
        if (a.drift_count != b.drift_count) return a.drift_count > b.drift_count;
        if (a.mean_strength != b.mean_strength) return a.mean_strength > b.mean_strength;
        return a.class_name < b.class_name;
    });
    if (series.size() > k) series.resize(k);
    return series;
}

std::vector<FeatureSeries> top_drifted_features(const BenchmarkLog& log, std::size_t k) {
    if (evaluated_rows(log).empty()) throw std::runtime_error("log has no evaluated rows");
    auto series = build_feature_series(log);
    if (series.empty()) throw std::runtime_error("log has no per-feature data");
    std::sort(series.begin(), series.end(), [](const FeatureSeries& a, const FeatureSeries& b) {
        if (a.drift_count != b.drift_count) return a.drift_count > b.drift_count;
        if (a.mean_severity != b.mean_severity) return a.mean_severity > b.mean_severity;
        return a.feature < b.feature;
    });
    if (series.size() > k) series.resize(k);
    return series;
}

std::vector<std::pair<std::string, double>> correlated_classes(const BenchmarkLog& log,
                                                               std::size_t k) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& series : build_class_series(log)) {
        if (series.f1_drift_correlation) {
            out.emplace_back(series.class_name, *series.f1_drift_correlation);
        }
    }
    if (out.empty()) {
        throw std::runtime_error("no class has enough paired points for correlation");
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

std::vector<std::string> classes_exceeding(const BenchmarkLog& log, std::size_t min_drifts) {
    std::map<std::string, std::size_t> counts;
    for (const auto& row : log.rows) {
        if (row.gap) continue;
        for (const auto& [name, outcome] : row.per_class_ref) {
            if (!outcome.absent && outcome.report->drifted) ++counts[name];
        }
    }
    std::vector<std::string> out;
    for (const auto& [name, count] : counts) {
        if (count > min_drifts) out.push_back(name);
    }
    return out;
}

std::string render_svg(const BenchmarkLog& log, const std::string& which) {
    if (evaluated_rows(log).empty()) throw std::runtime_error("log has no evaluated rows");

    // Charts keep gap rows on the x axis; their null values split the lines.
    std::vector<const LogRow*> rows;
    rows.reserve(log.rows.size());
    for (const auto& row : log.rows) rows.push_back(&row);

    ChartSpec spec;
    spec.threshold = log.config.drift.severity_threshold;
    for (const auto* row : rows) spec.window_ids.push_back(row->window_id);

    if (which == "global") {
        spec.title = "benchmark overview";
        SeriesDef f1_ref{"F1 frozen", "#1f77b4", true, {}};
        SeriesDef f1_re{"F1 retrained", "#2ca02c", true, {}};
        SeriesDef sev_ref{"severity frozen", "#ff7f0e", false, {}};
        SeriesDef sev_re{"severity retrained", "#d62728", false, {}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i]->gap) {
                f1_ref.values.emplace_back(std::nullopt);
                f1_re.values.emplace_back(std::nullopt);
                sev_ref.values.emplace_back(std::nullopt);
                sev_re.values.emplace_back(std::nullopt);
                continue;
            }
            f1_ref.values.emplace_back(rows[i]->f1_ref->macro_f1);
            f1_re.values.emplace_back(rows[i]->f1_retrain->macro_f1);
            sev_ref.values.emplace_back(rows[i]->report_ref->overall_severity);
            sev_re.values.emplace_back(rows[i]->report_retrain->overall_severity);
            if (rows[i]->retrained) spec.markers.push_back(i);
        }
        spec.series = {f1_ref, f1_re, sev_ref, sev_re};
        return render_chart(spec);
    }

    if (which.rfind("class:", 0) == 0) {
        const std::string name = which.substr(6);
        bool seen = false;
        SeriesDef f1_ref{"F1 frozen", "#1f77b4", true, {}};
        SeriesDef f1_re{"F1 retrained", "#2ca02c", true, {}};
        SeriesDef sev_ref{"severity frozen", "#ff7f0e", false, {}};
        SeriesDef sev_re{"severity retrained", "#d62728", false, {}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto add_f1 = [&](const std::optional<model::F1Breakdown>& f1, SeriesDef& def) {
                std::optional<double> v;
                if (f1) {
                    const auto it = f1->per_class.find(name);
                    if (it != f1->per_class.end()) v = it->second;
                }
                def.values.push_back(v);
            };
            const auto add_sev = [&](const std::map<std::string, detector::ClassDriftOutcome>& pc,
                                     SeriesDef& def) -> const detector::DriftReport* {
                const auto it = pc.find(name);
                if (it == pc.end() || it->second.absent) {
                    def.values.emplace_back(std::nullopt);
                    return nullptr;
                }
                def.values.emplace_back(it->second.report->overall_severity);
                return &*it->second.report;
            };
            add_f1(rows[i]->f1_ref, f1_ref);
            add_f1(rows[i]->f1_retrain, f1_re);
            const auto* ref_report = add_sev(rows[i]->per_class_ref, sev_ref);
            add_sev(rows[i]->per_class_retrain, sev_re);
            if (ref_report) {
                seen = true;
                if (ref_report->drifted) spec.markers.push_back(i);
            }
        }
        if (!seen) throw std::invalid_argument("unknown class in chart selector: " + name);
        spec.title = "class " + name;
        spec.series = {f1_ref, f1_re, sev_ref, sev_re};
        return render_chart(spec);
    }

    if (which.rfind("feature:", 0) == 0) {
        const std::string name = which.substr(8);
        const auto it = std::find(log.schema.begin(), log.schema.end(), name);
        if (it == log.schema.end()) {
            throw std::invalid_argument("unknown feature in chart selector: " + name);
        }
        const auto f = static_cast<std::size_t>(it - log.schema.begin());
        SeriesDef sev_ref{"severity frozen", "#ff7f0e", false, {}};
        SeriesDef sev_re{"severity retrained", "#d62728", false, {}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i]->gap) {
                sev_ref.values.emplace_back(std::nullopt);
                sev_re.values.emplace_back(std::nullopt);
                continue;
            }
            sev_ref.values.emplace_back(rows[i]->report_ref->per_feature.at(f).severity);
            sev_re.values.emplace_back(rows[i]->report_retrain->per_feature.at(f).severity);
            if (rows[i]->report_ref->per_feature.at(f).outcome.drifted) spec.markers.push_back(i);
        }
        spec.title = "feature " + name;
        spec.series = {sev_ref, sev_re};
        return render_chart(spec);
    }

    throw std::invalid_argument("unknown chart selector: " + which);
}

void write_bundle(const BenchmarkLog& log, const std::string& out_dir, std::size_t top_k) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    const auto rows = evaluated_rows(log);
    Json window_ids = Json::array();
    for (const auto* row : rows) window_ids.push_back(row->window_id);

    const auto summary = summarize(log);
    Json summary_json;
    const auto workflow_json = [](const WorkflowSummary& w) {
        Json j;
        j["drift_detection_count"] = w.drift_detection_count;
        j["drift_strength_mean"] = w.drift_strength_mean;
        j["share_drifted_features_mean"] = w.share_drifted_features_mean;
        j["f1_mean"] = w.f1_mean;
        return j;
    };
    summary_json["reference"] = workflow_json(summary.reference);
    summary_json["retraining"] = workflow_json(summary.retraining);
    summary_json["evaluated_windows"] = rows.size();
    write_text_file(dir / "summary.json", summary_json.dump(2) + "\n");

    auto all_classes = build_class_series(log);
    std::sort(all_classes.begin(), all_classes.end(),
              [](const ClassSeries& a, const ClassSeries& b) {
                  if (a.drift_count != b.drift_count) return a.drift_count > b.drift_count;
                  if (a.mean_strength != b.mean_strength) return a.mean_strength > b.mean_strength;
                  return a.class_name < b.class_name;
              });
    if (all_classes.size() > top_k) all_classes.resize(top_k);

    Json per_class;
    per_class["window_ids"] = window_ids;
    Json top_classes = Json::array();
    for (const auto& series : all_classes) {
        Json j;
        j["class"] = series.class_name;
        j["drift_count"] = series.drift_count;
        j["mean_strength"] = series.mean_strength;
        j["f1_drift_correlation"] = optional_to_json(series.f1_drift_correlation);
        j["drift_strengths"] = series_to_json(series.drift_strengths);
        j["f1"] = series_to_json(series.f1);
        top_classes.push_back(std::move(j));
    }
    per_class["top_classes"] = std::move(top_classes);
    Json correlated = Json::array();
    std::vector<std::pair<std::string, double>> corr;
    for (const auto& series : build_class_series(log)) {
        if (series.f1_drift_correlation) {
            corr.emplace_back(series.class_name, *series.f1_drift_correlation);
        }
    }
    std::sort(corr.begin(), corr.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    if (corr.size() > top_k) corr.resize(top_k);
    for (const auto& [name, value] : corr) {
        correlated.push_back(Json{{"class", name}, {"correlation", value}});
    }
    per_class["most_correlated"] = std::move(correlated);
    write_text_file(dir / "per_class.json", per_class.dump(2) + "\n");

    auto all_features = build_feature_series(log);
    std::sort(all_features.begin(), all_features.end(),
              [](const FeatureSeries& a, const FeatureSeries& b) {
                  if (a.drift_count != b.drift_count) return a.drift_count > b.drift_count;
                  if (a.mean_severity != b.mean_severity) return a.mean_severity > b.mean_severity;
                  return a.feature < b.feature;
              });
    if (all_features.size() > top_k) all_features.resize(top_k);

    Json per_feature;
    per_feature["window_ids"] = window_ids;
    Json top_features = Json::array();
    for (const auto& series : all_features) {
        Json j;
        j["feature"] = series.feature;
        j["drift_count"] = series.drift_count;
        j["mean_severity"] = series.mean_severity;
        j["severities"] = series.severities;
        j["statistics"] = series.statistics;
        top_features.push_back(std::move(j));
    }
    per_feature["top_features"] = std::move(top_features);
    write_text_file(dir / "per_feature.json", per_feature.dump(2) + "\n");

    write_text_file(dir / "global.svg", render_svg(log, "global"));
    for (const auto& series : all_classes) {
        write_text_file(dir / ("class_" + sanitize_filename(series.class_name) + ".svg"),
                        render_svg(log, "class:" + series.class_name));
    }
    for (const auto& series : all_features) {
        write_text_file(dir / ("feature_" + sanitize_filename(series.feature) + ".svg"),
                        render_svg(log, "feature:" + series.feature));
    }
}

}  // namespace driftbench::report
