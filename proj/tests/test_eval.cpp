#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "joinguard/error.hpp"
#include "joinguard/eval.hpp"
#include "oracle.hpp"

using namespace joinguard;
using oracle::capture;

TEST_SUITE_BEGIN("eval");

TEST_CASE("direction accuracy counts three-way agreement") {
    const std::vector<double> lone_pred = {-0.703638};
    const std::vector<double> lone_actual = {-0.703645};
    CHECK(direction_accuracy(lone_pred, lone_actual) == 1.0);

    const std::vector<double> pred = {0.1, -0.2};
    const std::vector<double> actual = {-0.1, -0.3};
    CHECK(direction_accuracy(pred, actual) == 0.5);

    const std::vector<double> same = {0.2, -0.2, 0.0};
    CHECK(direction_accuracy(same, same) == 1.0);

    // Epsilon folds small magnitudes into NoChange on both sides.
    const std::vector<double> tiny_pred = {1e-12, -1e-12};
    const std::vector<double> tiny_actual = {-1e-12, 1e-12};
    CHECK(direction_accuracy(tiny_pred, tiny_actual) == 1.0);
    CHECK(direction_accuracy(tiny_pred, tiny_actual, 0.0) == 0.0);
}

TEST_CASE("direction accuracy validates its inputs") {
    const std::vector<double> one = {0.1};
    const std::vector<double> two = {0.1, 0.2};
    const std::vector<double> none;
    CHECK(capture([&] { direction_accuracy(one, two); }).is(ErrorCategory::Argument, ""));
    CHECK(capture([&] { direction_accuracy(none, none); }).is(ErrorCategory::Argument, ""));
}

TEST_CASE("regression metrics match hand-worked values") {
    const std::vector<double> pred = {0.0, 0.0};
    const std::vector<double> actual = {1.0, -1.0};
    const auto [mae, rmse] = regression_metrics(pred, actual);
    CHECK(mae == 1.0);
    CHECK(rmse == 1.0);

    const std::vector<double> perfect = {0.3, -0.4, 0.0};
    const auto [mae2, rmse2] = regression_metrics(perfect, perfect);
    CHECK(mae2 == 0.0);
    CHECK(rmse2 == 0.0);

    const std::vector<double> p3 = {1.0, 2.0};
    const std::vector<double> a3 = {2.0, 4.0};
    const auto [mae3, rmse3] = regression_metrics(p3, a3);
    CHECK(mae3 == doctest::Approx(1.5));
    CHECK(rmse3 == doctest::Approx(std::sqrt(2.5)));
}

TEST_CASE("rank correlation matches hand-worked values") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y_agree = {10.0, 30.0, 20.0, 40.0};
    CHECK(rank_correlation(x, y_agree) == doctest::Approx(0.8).epsilon(1e-12));

    const std::vector<double> y_same = {5.0, 6.0, 7.0, 8.0};
    CHECK(rank_correlation(x, y_same) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> y_reversed = {8.0, 7.0, 6.0, 5.0};
    CHECK(rank_correlation(x, y_reversed) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("rank correlation averages tied ranks") {
    const std::vector<double> x = {1.0, 1.0, 2.0};
    const std::vector<double> y = {3.0, 3.0, 9.0};
    CHECK(rank_correlation(x, y) == doctest::Approx(1.0).epsilon(1e-12));

    // x ranks: {1.5, 1.5, 3}; y ranks: {1, 2, 3} and {2, 1, 3} disagree
    // only inside the tie, so the correlation is the same either way.
    const std::vector<double> y_up = {1.0, 2.0, 9.0};
    const std::vector<double> y_down = {2.0, 1.0, 9.0};
    CHECK(rank_correlation(x, y_up) == doctest::Approx(rank_correlation(x, y_down)));
}

TEST_CASE("rank correlation is invariant under monotone transforms") {
    std::mt19937_64 rng(701);
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(static_cast<double>(rng() % 1000) / 500.0 - 1.0);
        y.push_back(static_cast<double>(rng() % 1000) / 500.0 - 1.0);
    }
    const double base = rank_correlation(x, y);
    std::vector<double> x_cubed;
    for (double v : x) x_cubed.push_back(v * v * v + 5.0);
    CHECK(rank_correlation(x_cubed, y) == doctest::Approx(base).epsilon(1e-9));

    std::vector<double> y_neg;
    for (double v : y) y_neg.push_back(-v);
    CHECK(rank_correlation(x, y_neg) == doctest::Approx(-base).epsilon(1e-9));
}

TEST_CASE("rank correlation is invariant under joint permutation") {
    const std::vector<double> x = {0.3, 0.9, 0.1, 0.7, 0.5};
    const std::vector<double> y = {-0.1, -0.8, 0.2, -0.4, -0.3};
    const double base = rank_correlation(x, y);
    std::vector<std::size_t> order = {4, 2, 0, 3, 1};
    std::vector<double> xp;
    std::vector<double> yp;
    for (std::size_t i : order) {
        xp.push_back(x[i]);
        yp.push_back(y[i]);
    }
    CHECK(rank_correlation(xp, yp) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rank correlation rejects degenerate inputs") {
    const std::vector<double> two = {1.0, 2.0};
    CHECK(capture([&] { rank_correlation(two, two); })
              .is(ErrorCategory::Argument, "at least 3"));

    const std::vector<double> x = {1.0, 2.0, 3.0};
    const std::vector<double> mismatch = {1.0, 2.0};
    CHECK(capture([&] { rank_correlation(x, mismatch); })
              .is(ErrorCategory::Argument, "equally long"));

    const std::vector<double> flat = {4.0, 4.0, 4.0};
    CHECK(capture([&] { rank_correlation(x, flat); })
              .is(ErrorCategory::Metric, "zero rank variance"));
    CHECK(capture([&] { rank_correlation(flat, x); })
              .is(ErrorCategory::Metric, "zero rank variance"));
}

TEST_CASE("model evaluation composes the individual metrics") {
    const LabeledCorpus corpus = generate_corpus(GeneratorParams{}, 60, 13);
    REQUIRE(corpus.examples.size() == 60);
    Hyperparams hp;
    hp.n_trees = 30;
    const GbdtModel model = train(corpus, hp);
    const GbdtModel baseline = baseline_constant(corpus);
    const EvalReport report = evaluate_model(model, baseline, corpus);

    CHECK(report.n == 60);
    CHECK(report.epsilon == kDirectionEpsilon);

    std::vector<double> predicted;
    std::vector<double> baseline_predicted;
    std::vector<double> actual;
    std::vector<double> max_u;
    for (const LabeledExample& example : corpus.examples) {
        predicted.push_back(predict(model, example.features));
        baseline_predicted.push_back(predict(baseline, example.features));
        actual.push_back(example.target);
        max_u.push_back(*std::max_element(example.features.begin(), example.features.end()));
    }
    CHECK(report.direction_accuracy == direction_accuracy(predicted, actual));
    CHECK(report.baseline_direction_accuracy ==
          direction_accuracy(baseline_predicted, actual));
    const auto [mae, rmse] = regression_metrics(predicted, actual);
    CHECK(report.mae == mae);
    CHECK(report.rmse == rmse);
    CHECK(report.spearman_u_vs_signal == rank_correlation(max_u, actual));

    // On its own training corpus the model must beat a constant guess.
    CHECK(report.direction_accuracy > report.baseline_direction_accuracy);
    CHECK(report.mae < 0.3);

    CHECK(capture([&] { evaluate_model(model, baseline, LabeledCorpus{}); })
              .is(ErrorCategory::Metric, "empty corpus"));
}

TEST_SUITE_END();
