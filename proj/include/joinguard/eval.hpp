#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "joinguard/assess.hpp"
#include "joinguard/gbdt.hpp"

namespace joinguard {

struct EvalReport {
    std::size_t n = 0;
    double direction_accuracy = 0.0;
    double baseline_direction_accuracy = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    double spearman_u_vs_signal = 0.0;
    double epsilon = kDirectionEpsilon;
};

/// Fraction of indices whose predicted and actual three-way directions
/// (Increase/Decrease/NoChange under epsilon) agree.
double direction_accuracy(std::span<const double> predicted, std::span<const double> actual,
                          double epsilon = kDirectionEpsilon);

/// (mae, rmse).
std::pair<double, double> regression_metrics(std::span<const double> predicted,
                                             std::span<const double> actual);

/// Spearman rank correlation with average ranks for ties. Requires at
/// least 3 points and nonzero rank variance on both sides.
double rank_correlation(std::span<const double> x, std::span<const double> y);

/// Scores a model against a corpus: model and baseline direction
/// accuracy, regression error of the model, and the rank correlation
/// between max(features) and the actual targets.
EvalReport evaluate_model(const GbdtModel& model, const GbdtModel& baseline,
                          const LabeledCorpus& corpus, double epsilon = kDirectionEpsilon);

} // namespace joinguard
