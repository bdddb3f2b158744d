#pragma once

#include <string>
#include <vector>

#include "joinguard/join.hpp"
#include "joinguard/metrics.hpp"
#include "joinguard/table.hpp"

namespace joinguard {

enum class Direction {
    Increase,
    Decrease,
    NoChange,
};

const char* to_string(Direction direction);

/// Reference the post-join ratio is compared against: the larger pre-join
/// ratio, or the constant 1.0 (a fully unique source).
enum class BaselineMode {
    Max,
    One,
};

const char* to_string(BaselineMode mode);
BaselineMode parse_baseline_mode(const std::string& text);

constexpr double kDirectionEpsilon = 1e-9;

/// u_ab - max(u_a, u_b). All inputs must lie in (0, 1].
double leakage_signal(double u_a, double u_b, double u_ab);

/// |delta| <= epsilon is NoChange; otherwise the sign decides.
Direction direction(double delta, double epsilon = kDirectionEpsilon);

struct AssessOptions {
    /// Empty means all columns of the respective table.
    std::vector<std::string> attrs_a;
    std::vector<std::string> attrs_b;
    BaselineMode baseline_mode = BaselineMode::Max;
    double epsilon = kDirectionEpsilon;
    std::vector<std::size_t> small_ks = {2, 5};
};

/// Pre/post-join measurement outcome.
///   baseline = max(U(A), U(B)) under Max mode, 1.0 under One mode
///   signal = U(AB) - baseline, always in [-1, 1]
///   directions follow the sign of their deltas under epsilon
struct LeakageAssessment {
    UniquenessReport report_a;
    UniquenessReport report_b;
    UniquenessReport report_ab;
    double baseline = 0.0;
    double signal = 0.0;
    Direction overall_direction = Direction::NoChange;
    Direction direction_a = Direction::NoChange;
    Direction direction_b = Direction::NoChange;
    JoinSpec join_spec;
    double epsilon = kDirectionEpsilon;
};

/// Measures both inputs, joins them per spec, measures the merged table
/// over all of its columns, and derives signal and directions. A join
/// with zero output rows is an assess error (its uniqueness is
/// undefined).
LeakageAssessment assess_pair(const Table& a, const Table& b, const JoinSpec& spec,
                              const AssessOptions& options = {});

} // namespace joinguard
