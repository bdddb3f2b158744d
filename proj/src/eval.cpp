#include "joinguard/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace joinguard {

namespace {

void check_lengths(std::size_t predicted, std::size_t actual) {
    if (predicted == 0 || predicted != actual) {
        throw Error(ErrorCategory::Argument,
                    "lists must be non-empty and equally long, got " +
                        std::to_string(predicted) + " and " + std::to_string(actual));
    }
}

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace

double direction_accuracy(std::span<const double> predicted, std::span<const double> actual,
                          double epsilon) {
    check_lengths(predicted.size(), actual.size());
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (direction(predicted[i], epsilon) == direction(actual[i], epsilon)) {
            ++matches;
        }
    }
    return static_cast<double>(matches) / static_cast<double>(predicted.size());
}

std::pair<double, double> regression_metrics(std::span<const double> predicted,
                                             std::span<const double> actual) {
    check_lengths(predicted.size(), actual.size());
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const double n = static_cast<double>(predicted.size());
    return {abs_sum / n, std::sqrt(sq_sum / n)};
}

double rank_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCategory::Argument, "lists must be equally long");
    }
    if (x.size() < 3) {
        throw Error(ErrorCategory::Argument, "rank correlation needs at least 3 points");
    }
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw Error(ErrorCategory::Metric, "undefined correlation: zero rank variance");
    }
    return cov / std::sqrt(var_x * var_y);
}

EvalReport evaluate_model(const GbdtModel& model, const GbdtModel& baseline,
                          const LabeledCorpus& corpus, double epsilon) {
    if (corpus.examples.empty()) {
        throw Error(ErrorCategory::Metric, "empty corpus");
    }
    std::vector<double> predicted;
    std::vector<double> baseline_predicted;
    std::vector<double> actual;
    std::vector<double> max_u;
    predicted.reserve(corpus.examples.size());
    baseline_predicted.reserve(corpus.examples.size());
    actual.reserve(corpus.examples.size());
    max_u.reserve(corpus.examples.size());
    for (const LabeledExample& example : corpus.examples) {
        predicted.push_back(predict(model, example.features));
        baseline_predicted.push_back(predict(baseline, example.features));
        actual.push_back(example.target);
        max_u.push_back(*std::max_element(example.features.begin(), example.features.end()));
    }
    EvalReport report;
    report.n = corpus.examples.size();
    report.direction_accuracy = direction_accuracy(predicted, actual, epsilon);
    report.baseline_direction_accuracy =
        direction_accuracy(baseline_predicted, actual, epsilon);
    std::tie(report.mae, report.rmse) = regression_metrics(predicted, actual);
    report.spearman_u_vs_signal = rank_correlation(max_u, actual);
    report.epsilon = epsilon;
    return report;
}

} // namespace joinguard
