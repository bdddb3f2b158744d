#include "joinguard/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace joinguard {

namespace {

void validate(const Hyperparams& hp) {
    if (hp.n_trees < 1 || hp.max_depth < 1 || hp.min_samples_leaf < 1) {
        throw Error(ErrorCategory::Train, "n_trees, max_depth, min_samples_leaf must be >= 1");
    }
    if (!(hp.learning_rate > 0.0) || hp.learning_rate > 1.0) {
        throw Error(ErrorCategory::Train, "learning_rate must lie in (0, 1]");
    }
}

std::vector<std::string> default_feature_names(std::size_t dim) {
    if (dim == 2) return {"u_a", "u_b"};
    std::vector<std::string> names;
    names.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        names.push_back("f" + std::to_string(j + 1));
    }
    return names;
}

struct TrainingData {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
};

TrainingData extract(const LabeledCorpus& corpus) {
    TrainingData data;
    data.x.reserve(corpus.examples.size());
    data.y.reserve(corpus.examples.size());
    const std::size_t dim = corpus.examples.empty() ? 0 : corpus.examples[0].features.size();
    for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
        const LabeledExample& example = corpus.examples[i];
        if (example.features.size() != dim) {
            throw Error(ErrorCategory::Train,
                        "inconsistent feature count at example " + std::to_string(i));
        }
        for (double v : example.features) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCategory::Train,
                            "non-finite feature at example " + std::to_string(i));
            }
        }
        if (!std::isfinite(example.target)) {
            throw Error(ErrorCategory::Train,
                        "non-finite target at example " + std::to_string(i));
        }
        data.x.push_back(example.features);
        data.y.push_back(example.target);
    }
    return data;
}

double mean_of(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

/// Greedy single-tree builder over fixed residuals.
class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<double>& residuals,
                std::size_t max_depth, std::size_t min_leaf)
        : x_(x), residuals_(residuals), max_depth_(max_depth), min_leaf_(min_leaf) {}

    RegressionTree take() && { return std::move(tree_); }

    int build(std::vector<std::size_t> samples, std::size_t depth) {
        double sum = 0.0;
        for (std::size_t i : samples) sum += residuals_[i];
        const int index = static_cast<int>(tree_.nodes.size());
        TreeNode node;
        node.value = sum / static_cast<double>(samples.size());
        tree_.nodes.push_back(node);
        if (depth >= max_depth_ || samples.size() < 2 * min_leaf_) {
            return index;
        }
        const SplitChoice split = best_split(samples);
        if (!split.found) {
            return index;
        }
        std::vector<std::size_t> left_samples;
        std::vector<std::size_t> right_samples;
        for (std::size_t i : samples) {
            (x_[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left_samples
                                                                               : right_samples)
                .push_back(i);
        }
        tree_.nodes[index].feature = split.feature;
        tree_.nodes[index].threshold = split.threshold;
        tree_.nodes[index].left = build(std::move(left_samples), depth + 1);
        tree_.nodes[index].right = build(std::move(right_samples), depth + 1);
        return index;
    }

private:
    /// Scans features ascending and thresholds ascending with a strict
    /// improvement test, so equal gains resolve to the lowest feature
    /// index and lowest threshold.
    SplitChoice best_split(const std::vector<std::size_t>& samples) const {
        SplitChoice best;
        const std::size_t n = samples.size();
        const std::size_t dim = x_[samples[0]].size();
        std::vector<std::pair<double, double>> ordered(n);
        for (std::size_t f = 0; f < dim; ++f) {
            for (std::size_t k = 0; k < n; ++k) {
                ordered[k] = {x_[samples[k]][f], residuals_[samples[k]]};
            }
            std::sort(ordered.begin(), ordered.end());
            double total_sum = 0.0;
            double total_sq = 0.0;
            for (const auto& [value, residual] : ordered) {
                total_sum += residual;
                total_sq += residual * residual;
            }
            const double total_sse =
                total_sq - total_sum * total_sum / static_cast<double>(n);
            double left_sum = 0.0;
            double left_sq = 0.0;
            for (std::size_t k = 1; k < n; ++k) {
                left_sum += ordered[k - 1].second;
                left_sq += ordered[k - 1].second * ordered[k - 1].second;
                const double lo = ordered[k - 1].first;
                const double hi = ordered[k].first;
                if (lo == hi) continue;
                if (k < min_leaf_ || n - k < min_leaf_) continue;
                const double left_sse =
                    left_sq - left_sum * left_sum / static_cast<double>(k);
                const double right_sum = total_sum - left_sum;
                const double right_sq = total_sq - left_sq;
                const double right_sse =
                    right_sq - right_sum * right_sum / static_cast<double>(n - k);
                const double gain = total_sse - left_sse - right_sse;
                if (gain > best.gain) {
                    double threshold = (lo + hi) / 2.0;
                    if (!(threshold < hi)) threshold = lo;
                    best.found = true;
                    best.feature = static_cast<int>(f);
                    best.threshold = threshold;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<double>& residuals_;
    std::size_t max_depth_;
    std::size_t min_leaf_;
    RegressionTree tree_;
};

double tree_value(const RegressionTree& tree, const std::vector<double>& features) {
    std::size_t index = 0;
    while (tree.nodes[index].feature >= 0) {
        const TreeNode& node = tree.nodes[index];
        index = static_cast<std::size_t>(
            features[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                               : node.right);
    }
    return tree.nodes[index].value;
}

double mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(predictions.size());
}

} // namespace

GbdtModel train(const LabeledCorpus& corpus, const Hyperparams& hp, TrainTrace* trace) {
    validate(hp);
    if (corpus.examples.size() < 2) {
        throw Error(ErrorCategory::Train, "corpus must contain at least 2 examples");
    }
    TrainingData data = extract(corpus);
    const std::size_t n = data.y.size();
    const std::size_t dim = data.x[0].size();
    if (dim < 1) {
        throw Error(ErrorCategory::Train, "examples carry no features");
    }

    GbdtModel model;
    model.feature_names = default_feature_names(dim);
    model.init_prediction = mean_of(data.y);
    model.learning_rate = hp.learning_rate;
    model.trees.reserve(hp.n_trees);

    std::vector<double> predictions(n, model.init_prediction);
    std::vector<double> residuals(n);
    if (trace != nullptr) {
        trace->stage_mse.clear();
        trace->stage_mse.push_back(mse(predictions, data.y));
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t t = 0; t < hp.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            residuals[i] = data.y[i] - predictions[i];
        }
        TreeBuilder builder(data.x, residuals, hp.max_depth, hp.min_samples_leaf);
        builder.build(all, 0);
        RegressionTree tree = std::move(builder).take();
        for (std::size_t i = 0; i < n; ++i) {
            predictions[i] += hp.learning_rate * tree_value(tree, data.x[i]);
        }
        model.trees.push_back(std::move(tree));
        if (trace != nullptr) {
            trace->stage_mse.push_back(mse(predictions, data.y));
        }
    }
    return model;
}

GbdtModel baseline_constant(const LabeledCorpus& corpus) {
    if (corpus.examples.empty()) {
        throw Error(ErrorCategory::Train, "empty corpus");
    }
    TrainingData data = extract(corpus);
    GbdtModel model;
    model.feature_names = default_feature_names(data.x[0].size());
    model.init_prediction = mean_of(data.y);
    model.learning_rate = 1.0;
    return model;
}

double predict(const GbdtModel& model, const std::vector<double>& features) {
    if (features.size() != model.feature_names.size()) {
        throw Error(ErrorCategory::Argument,
                    "expected " + std::to_string(model.feature_names.size()) +
                        " features, got " + std::to_string(features.size()));
    }
    for (double v : features) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCategory::Argument, "features must be finite");
        }
    }
    double sum = 0.0;
    for (const RegressionTree& tree : model.trees) {
        sum += tree_value(tree, features);
    }
    return model.init_prediction + model.learning_rate * sum;
}

std::vector<double> predict_all(const GbdtModel& model,
                                const std::vector<std::vector<double>>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(predict(model, row));
    }
    return out;
}

std::string save_model(const GbdtModel& model) {
    nlohmann::ordered_json doc;
    doc["version"] = model.version;
    doc["feature_names"] = model.feature_names;
    doc["init_prediction"] = model.init_prediction;
    doc["learning_rate"] = model.learning_rate;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const RegressionTree& tree : model.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const TreeNode& node : tree.nodes) {
            nlohmann::ordered_json entry;
            if (node.feature >= 0) {
                entry["feature"] = node.feature;
                entry["threshold"] = node.threshold;
                entry["left"] = node.left;
                entry["right"] = node.right;
            } else {
                entry["value"] = node.value;
            }
            nodes.push_back(std::move(entry));
        }
        trees.push_back(nlohmann::ordered_json{{"nodes", std::move(nodes)}});
    }
    doc["trees"] = std::move(trees);
    return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void malformed(const std::string& detail) {
    throw Error(ErrorCategory::Persist, "malformed model: " + detail);
}

} // namespace

GbdtModel load_model(const std::string& payload) {
    const nlohmann::json doc = nlohmann::json::parse(payload, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        malformed("payload is not a JSON object");
    }
    if (!doc.contains("version") || !doc.at("version").is_string()) {
        malformed("missing version");
    }
    if (doc.at("version").get<std::string>() != kModelVersion) {
        throw Error(ErrorCategory::Persist,
                    "unsupported model version: " + doc.at("version").get<std::string>());
    }
    if (!doc.contains("feature_names") || !doc.at("feature_names").is_array() ||
        doc.at("feature_names").empty()) {
        malformed("missing feature_names");
    }
    if (!doc.contains("init_prediction") || !doc.at("init_prediction").is_number()) {
        malformed("missing init_prediction");
    }
    if (!doc.contains("learning_rate") || !doc.at("learning_rate").is_number()) {
        malformed("missing learning_rate");
    }
    if (!doc.contains("trees") || !doc.at("trees").is_array()) {
        malformed("missing trees");
    }

    GbdtModel model;
    model.version = kModelVersion;
    for (const auto& name : doc.at("feature_names")) {
        if (!name.is_string()) malformed("feature name is not a string");
        model.feature_names.push_back(name.get<std::string>());
    }
    model.init_prediction = doc.at("init_prediction").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    if (!(model.learning_rate > 0.0) || model.learning_rate > 1.0) {
        malformed("learning_rate outside (0, 1]");
    }
    const int dim = static_cast<int>(model.feature_names.size());

    for (const auto& tree_doc : doc.at("trees")) {
        if (!tree_doc.is_object() || !tree_doc.contains("nodes") ||
            !tree_doc.at("nodes").is_array() || tree_doc.at("nodes").empty()) {
            malformed("tree without nodes");
        }
        const auto& nodes_doc = tree_doc.at("nodes");
        RegressionTree tree;
        tree.nodes.reserve(nodes_doc.size());
        const int count = static_cast<int>(nodes_doc.size());
        for (int index = 0; index < count; ++index) {
            const auto& node_doc = nodes_doc.at(static_cast<std::size_t>(index));
            if (!node_doc.is_object()) malformed("node is not an object");
            TreeNode node;
            if (node_doc.contains("feature")) {
                if (!node_doc.at("feature").is_number_integer() ||
                    !node_doc.contains("threshold") || !node_doc.at("threshold").is_number() ||
                    !node_doc.contains("left") || !node_doc.at("left").is_number_integer() ||
                    !node_doc.contains("right") || !node_doc.at("right").is_number_integer()) {
                    malformed("incomplete internal node");
                }
                node.feature = node_doc.at("feature").get<int>();
                node.threshold = node_doc.at("threshold").get<double>();
                node.left = node_doc.at("left").get<int>();
                node.right = node_doc.at("right").get<int>();
                if (node.feature < 0 || node.feature >= dim) {
                    malformed("feature index out of range");
                }
                if (node.left <= index || node.left >= count || node.right <= index ||
                    node.right >= count) {
                    malformed("child index out of pre-order range");
                }
            } else {
                if (!node_doc.contains("value") || !node_doc.at("value").is_number()) {
                    malformed("leaf without value");
                }
                node.value = node_doc.at("value").get<double>();
            }
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

} // namespace joinguard
