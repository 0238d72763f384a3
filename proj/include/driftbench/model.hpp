#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "driftbench/data.hpp"
#include "driftbench/detector.hpp"

namespace driftbench::model {

struct Hyperparams {
    std::size_t tree_count = 50;
    std::size_t max_depth = 12;
    std::size_t min_leaf_size = 2;
    std::uint64_t rng_seed = 0;
};

// Flat node storage; node 0 is the root. Split nodes route x <= threshold to
// the left child. Leaves carry class probabilities aligned with
// TrainedModel::classes.
struct TreeNode {
    bool leaf = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<double> probs;
};

struct Tree {
    std::vector<TreeNode> nodes;
};

struct TrainedModel {
    std::vector<std::string> schema;
    std::vector<std::string> classes;
    std::vector<Tree> trees;
    std::map<std::string, double> raw_importances;
    Hyperparams hyperparams;
};

struct F1Breakdown {
    double macro_f1 = 0.0;
    std::map<std::string, double> per_class;
};

// Bootstrap index stream for one tree. Draws are a pure function of
// (seed, tree_index), independent of sample values, so callers can permute
// the training rows and compensate by remapping these indices.
std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t tree_index,
                                           std::size_t n);

// Grows a single tree over window rows selected by `indices` (duplicates
// allowed). Impurity decreases are accumulated into `importance_accum`
// keyed by feature name.
Tree grow_tree(const Window& window, const std::vector<std::string>& classes,
               const std::vector<std::size_t>& indices, const Hyperparams& hp,
               std::uint64_t tree_seed, std::map<std::string, double>& importance_accum);

TrainedModel train(const Window& window, const Hyperparams& hp);

std::vector<std::string> predict(const TrainedModel& model,
                                 const std::vector<std::vector<double>>& samples);

detector::FeatureWeights importances(const TrainedModel& model);

F1Breakdown f1_scores(const std::vector<std::string>& truth,
                      const std::vector<std::string>& pred);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace driftbench::model
