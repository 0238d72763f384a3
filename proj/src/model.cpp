#include "driftbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "driftbench/rng.hpp"

namespace driftbench::model {

namespace {

using Json = nlohmann::ordered_json;
using rng::bounded;

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (const std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;
};

class TreeBuilder {
  public:
    TreeBuilder(const Window& window, const std::vector<std::string>& classes,
                const std::vector<std::size_t>& indices, const Hyperparams& hp,
                std::uint64_t tree_seed, std::map<std::string, double>& importance_accum)
        : window_(window),
          classes_(classes),
          hp_(hp),
          gen_(tree_seed),
          importance_accum_(importance_accum) {
        std::map<std::string, std::size_t> class_index;
        for (std::size_t c = 0; c < classes_.size(); ++c) class_index[classes_[c]] = c;

        // Materialize the drawn rows up front: growth then depends only on
        // the drawn value sequence, not on the source sample order.
        const std::size_t n_features = window_.schema.size();
        values_.assign(n_features, std::vector<double>(indices.size()));
        labels_.resize(indices.size());
        for (std::size_t r = 0; r < indices.size(); ++r) {
            const auto& sample = window_.samples.at(indices[r]);
            for (std::size_t f = 0; f < n_features; ++f) values_[f][r] = sample.features[f];
            const auto it = class_index.find(sample.label);
            if (it == class_index.end()) {
                throw std::invalid_argument("label not in class list: '" + sample.label + "'");
            }
            labels_[r] = it->second;
        }
        candidate_count_ = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(n_features))));
    }

    Tree build() {
        std::vector<std::size_t> rows(labels_.size());
        for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
        grow(rows, 0);
        return std::move(tree_);
    }

  private:
    std::vector<std::size_t> draw_candidates() {
        std::vector<std::size_t> pool(window_.schema.size());
        for (std::size_t f = 0; f < pool.size(); ++f) pool[f] = f;
        const std::size_t k = std::min(candidate_count_, pool.size());
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + bounded(gen_, pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    std::vector<std::size_t> class_counts(const std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> counts(classes_.size(), 0);
        for (const std::size_t r : rows) ++counts[labels_[r]];
        return counts;
    }

    // Best boundary between distinct values of one feature; only cuts that
    // leave min_leaf_size rows on both sides qualify.
    SplitChoice scan_feature(const std::vector<std::size_t>& rows, std::size_t feature,
                             double parent_gini,
                             const std::vector<std::size_t>& parent_counts) const {
        std::vector<std::pair<double, std::size_t>> ordered;
        ordered.reserve(rows.size());
        for (const std::size_t r : rows) ordered.emplace_back(values_[feature][r], labels_[r]);
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        const std::size_t m = ordered.size();
        std::vector<std::size_t> left_counts(classes_.size(), 0);
        std::vector<std::size_t> right_counts = parent_counts;

        SplitChoice best;
        best.feature = feature;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            ++left_counts[ordered[i].second];
            --right_counts[ordered[i].second];
            if (ordered[i + 1].first <= ordered[i].first) continue;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = m - n_left;
            if (n_left < hp_.min_leaf_size || n_right < hp_.min_leaf_size) continue;
            const double weighted =
                (static_cast<double>(n_left) * gini(left_counts, n_left) +
                 static_cast<double>(n_right) * gini(right_counts, n_right)) /
                static_cast<double>(m);
            const double decrease = parent_gini - weighted;
            if (decrease > best.decrease) {
                best.found = true;
                best.decrease = decrease;
                best.threshold = ordered[i].first;
            }
        }
        return best;
    }

    std::int32_t make_leaf(const std::vector<std::size_t>& counts, std::size_t total) {
        TreeNode node;
        node.leaf = true;
        node.probs.resize(classes_.size());
        for (std::size_t c = 0; c < counts.size(); ++c) {
            node.probs[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
        }
        const auto idx = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.push_back(std::move(node));
        return idx;
    }

    std::int32_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
        const auto counts = class_counts(rows);
        const double node_gini = gini(counts, rows.size());
        const bool splittable = depth < hp_.max_depth &&
                                rows.size() >= 2 * hp_.min_leaf_size && node_gini > 0.0;
        if (!splittable) return make_leaf(counts, rows.size());

        SplitChoice best;
        for (const std::size_t feature : draw_candidates()) {
            const SplitChoice candidate = scan_feature(rows, feature, node_gini, counts);
            if (candidate.found && candidate.decrease > best.decrease) best = candidate;
        }
        if (!best.found) return make_leaf(counts, rows.size());

        importance_accum_[window_.schema[best.feature]] +=
            best.decrease * static_cast<double>(rows.size()) /
            static_cast<double>(labels_.size());

        std::vector<std::size_t> left_rows, right_rows;
        for (const std::size_t r : rows) {
            (values_[best.feature][r] <= best.threshold ? left_rows : right_rows).push_back(r);
        }

        const auto idx = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[idx].feature = best.feature;
        tree_.nodes[idx].threshold = best.threshold;
        const std::int32_t left = grow(left_rows, depth + 1);
        const std::int32_t right = grow(right_rows, depth + 1);
        tree_.nodes[idx].left = left;
        tree_.nodes[idx].right = right;
        return idx;
    }

    const Window& window_;
    const std::vector<std::string>& classes_;
    const Hyperparams& hp_;
    std::mt19937_64 gen_;
    std::map<std::string, double>& importance_accum_;

    std::vector<std::vector<double>> values_;
    std::vector<std::size_t> labels_;
    std::size_t candidate_count_ = 0;
    Tree tree_;
};

std::size_t leaf_argmax(const TreeNode& node) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < node.probs.size(); ++c) {
        if (node.probs[c] > node.probs[best]) best = c;
    }
    return best;
}

Json node_to_json(const Tree& tree, std::int32_t idx) {
    const TreeNode& node = tree.nodes.at(static_cast<std::size_t>(idx));
    Json j;
    if (node.leaf) {
        j["kind"] = "leaf";
        j["probs"] = node.probs;
        return j;
    }
    j["kind"] = "split";
    j["feature"] = node.feature;
    j["threshold"] = node.threshold;
    j["left"] = node_to_json(tree, node.left);
    j["right"] = node_to_json(tree, node.right);
    return j;
}

std::int32_t node_from_json(const Json& j, Tree& tree) {
    const auto idx = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "leaf") {
        tree.nodes[idx].leaf = true;
        tree.nodes[idx].probs = j.at("probs").get<std::vector<double>>();
        return idx;
    }
    if (kind != "split") throw std::runtime_error("unknown tree node kind: " + kind);
    tree.nodes[idx].feature = j.at("feature").get<std::size_t>();
    tree.nodes[idx].threshold = j.at("threshold").get<double>();
    const std::int32_t left = node_from_json(j.at("left"), tree);
    const std::int32_t right = node_from_json(j.at("right"), tree);
    tree.nodes[idx].left = left;
    tree.nodes[idx].right = right;
    return idx;
}

}  // namespace

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t tree_index,
                                           std::size_t n) {
    if (n == 0) throw std::invalid_argument("cannot bootstrap from zero samples");
    std::mt19937_64 gen(rng::derive_seed(seed, 2 * tree_index));
    std::vector<std::size_t> indices(n);
    for (auto& idx : indices) idx = bounded(gen, n);
    return indices;
}

Tree grow_tree(const Window& window, const std::vector<std::string>& classes,
               const std::vector<std::size_t>& indices, const Hyperparams& hp,
               std::uint64_t tree_seed, std::map<std::string, double>& importance_accum) {
    if (indices.empty()) throw std::invalid_argument("cannot grow a tree from zero rows");
    if (classes.empty()) throw std::invalid_argument("class list is empty");
    TreeBuilder builder(window, classes, indices, hp, tree_seed, importance_accum);
    return builder.build();
}

TrainedModel train(const Window& window, const Hyperparams& hp) {
    if (!window.labeled()) throw std::invalid_argument("training requires a labeled window");
    if (window.size() < 2) throw std::invalid_argument("training requires at least 2 samples");
    if (hp.tree_count < 1 || hp.max_depth < 1 || hp.min_leaf_size < 1) {
        throw std::invalid_argument(
            "tree_count, max_depth and min_leaf_size must all be at least 1");
    }

    TrainedModel m;
    m.schema = window.schema;
    m.hyperparams = hp;
    std::set<std::string> labels;
    for (const auto& s : window.samples) labels.insert(s.label);
    m.classes.assign(labels.begin(), labels.end());
    for (const auto& name : m.schema) m.raw_importances[name] = 0.0;

    m.trees.reserve(hp.tree_count);
    for (std::size_t t = 0; t < hp.tree_count; ++t) {
        const auto indices = bootstrap_indices(hp.rng_seed, t, window.size());
        const std::uint64_t tree_seed = rng::derive_seed(hp.rng_seed, 2 * t + 1);
        m.trees.push_back(
            grow_tree(window, m.classes, indices, hp, tree_seed, m.raw_importances));
    }
    return m;
}

std::vector<std::string> predict(const TrainedModel& model,
                                 const std::vector<std::vector<double>>& samples) {
    std::vector<std::string> out;
    out.reserve(samples.size());
    for (const auto& x : samples) {
        if (x.size() != model.schema.size()) {
            throw std::invalid_argument("feature vector size " + std::to_string(x.size()) +
                                        " does not match schema size " +
                                        std::to_string(model.schema.size()));
        }
        std::vector<std::size_t> votes(model.classes.size(), 0);
        for (const auto& tree : model.trees) {
            std::int32_t node = 0;
            while (!tree.nodes[static_cast<std::size_t>(node)].leaf) {
                const auto& n = tree.nodes[static_cast<std::size_t>(node)];
                node = x[n.feature] <= n.threshold ? n.left : n.right;
            }
            ++votes[leaf_argmax(tree.nodes[static_cast<std::size_t>(node)])];
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < votes.size(); ++c) {
            if (votes[c] > votes[best]) best = c;
        }
        out.push_back(model.classes[best]);
    }
    return out;
}

detector::FeatureWeights importances(const TrainedModel& model) {
    return detector::normalize_weights(model.raw_importances);
}

F1Breakdown f1_scores(const std::vector<std::string>& truth,
                      const std::vector<std::string>& pred) {
    if (truth.size() != pred.size()) {
        throw std::invalid_argument("truth and prediction lists have different lengths");
    }
    if (truth.empty()) throw std::invalid_argument("empty label lists");

    std::set<std::string> all(truth.begin(), truth.end());
    all.insert(pred.begin(), pred.end());

    F1Breakdown out;
    for (const auto& cls : all) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i] == cls;
            const bool p = pred[i] == cls;
            if (t && p) ++tp;
            if (!t && p) ++fp;
            if (t && !p) ++fn;
        }
        const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        out.per_class[cls] = f1;
    }

    const std::set<std::string> truth_classes(truth.begin(), truth.end());
    double sum = 0.0;
    for (const auto& cls : truth_classes) sum += out.per_class.at(cls);
    out.macro_f1 = sum / static_cast<double>(truth_classes.size());
    return out;
}

std::string model_to_json(const TrainedModel& model) {
    Json doc;
    doc["format"] = "driftbench.model";
    doc["version"] = 1;
    doc["schema"] = model.schema;
    doc["classes"] = model.classes;
    doc["hyperparams"] = {{"tree_count", model.hyperparams.tree_count},
                          {"max_depth", model.hyperparams.max_depth},
                          {"min_leaf_size", model.hyperparams.min_leaf_size},
                          {"rng_seed", model.hyperparams.rng_seed}};
    doc["raw_importances"] = model.raw_importances;
    Json trees = Json::array();
    for (const auto& tree : model.trees) trees.push_back(node_to_json(tree, 0));
    doc["trees"] = std::move(trees);
    return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("invalid model JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "driftbench.model") {
            throw std::runtime_error("not a model document");
        }
        if (doc.at("version").get<int>() != 1) {
            throw std::runtime_error("unsupported model document version");
        }
        TrainedModel m;
        m.schema = doc.at("schema").get<std::vector<std::string>>();
        m.classes = doc.at("classes").get<std::vector<std::string>>();
        const auto& hp = doc.at("hyperparams");
        m.hyperparams.tree_count = hp.at("tree_count").get<std::size_t>();
        m.hyperparams.max_depth = hp.at("max_depth").get<std::size_t>();
        m.hyperparams.min_leaf_size = hp.at("min_leaf_size").get<std::size_t>();
        m.hyperparams.rng_seed = hp.at("rng_seed").get<std::uint64_t>();
        m.raw_importances = doc.at("raw_importances").get<std::map<std::string, double>>();
        for (const auto& tree_doc : doc.at("trees")) {
            Tree tree;
            node_from_json(tree_doc, tree);
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const Json::exception& e) {
        throw std::runtime_error(std::string("invalid model JSON: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << model_to_json(model);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace driftbench::model
