#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "joinguard/synth.hpp"

namespace joinguard {

struct Hyperparams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 3;
    double learning_rate = 0.1;
    std::size_t min_samples_leaf = 2;
    std::uint64_t seed = 0;
};

/// One tree node; nodes live in pre-order within their tree and refer to
/// children by index. feature < 0 marks a leaf carrying `value`.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;
};

inline constexpr const char* kModelVersion = "joinguard-gbdt-1";

/// Additive ensemble under squared-error loss:
///   prediction(x) = init_prediction + learning_rate * Σ_t leaf_t(x)
struct GbdtModel {
    std::string version = kModelVersion;
    std::vector<std::string> feature_names;
    double init_prediction = 0.0;
    double learning_rate = 0.1;
    std::vector<RegressionTree> trees;
};

/// Training-set MSE after initialization (index 0) and after each stage.
struct TrainTrace {
    std::vector<double> stage_mse;
};

/// Squared-error boosting: init = target mean; each stage fits a
/// depth-limited regression tree to the residuals (greedy variance
/// reduction, thresholds at midpoints of sorted distinct values, ties
/// broken toward the lowest feature index then lowest threshold, both
/// children at least min_samples_leaf) and steps predictions by
/// learning_rate. Deterministic for fixed (corpus, hp).
GbdtModel train(const LabeledCorpus& corpus, const Hyperparams& hp,
                TrainTrace* trace = nullptr);

/// Zero-tree model predicting the corpus target mean everywhere.
GbdtModel baseline_constant(const LabeledCorpus& corpus);

/// Walks every tree; x[feature] <= threshold descends left.
double predict(const GbdtModel& model, const std::vector<double>& features);

std::vector<double> predict_all(const GbdtModel& model,
                                const std::vector<std::vector<double>>& rows);

/// JSON persistence. load_model(save_model(m)) predicts identically to
/// m; version or shape mismatches are persistence errors.
std::string save_model(const GbdtModel& model);
GbdtModel load_model(const std::string& payload);

} // namespace joinguard
