#include "joinguard/assess.hpp"

#include <algorithm>
#include <cmath>

namespace joinguard {

const char* to_string(Direction direction) {
    switch (direction) {
        case Direction::Increase: return "Increase";
        case Direction::Decrease: return "Decrease";
        case Direction::NoChange: return "NoChange";
    }
    return "unknown";
}

const char* to_string(BaselineMode mode) {
    switch (mode) {
        case BaselineMode::Max: return "max";
        case BaselineMode::One: return "one";
    }
    return "unknown";
}

BaselineMode parse_baseline_mode(const std::string& text) {
    if (text == "max") return BaselineMode::Max;
    if (text == "one") return BaselineMode::One;
    throw Error(ErrorCategory::Argument, "unknown baseline mode: " + text);
}

namespace {

void check_ratio(double value, const char* name) {
    if (!(value > 0.0) || value > 1.0) {
        throw Error(ErrorCategory::Argument,
                    std::string(name) + " must lie in (0, 1], got " + std::to_string(value));
    }
}

std::vector<std::string> all_column_names(const Table& table) {
    std::vector<std::string> names;
    names.reserve(table.column_count());
    for (const auto& column : table.columns()) {
        names.push_back(column.name);
    }
    return names;
}

} // namespace

double leakage_signal(double u_a, double u_b, double u_ab) {
    check_ratio(u_a, "u_a");
    check_ratio(u_b, "u_b");
    check_ratio(u_ab, "u_ab");
    return u_ab - std::max(u_a, u_b);
}

Direction direction(double delta, double epsilon) {
    if (std::abs(delta) <= epsilon) return Direction::NoChange;
    return delta > 0.0 ? Direction::Increase : Direction::Decrease;
}

LeakageAssessment assess_pair(const Table& a, const Table& b, const JoinSpec& spec,
                              const AssessOptions& options) {
    std::vector<std::string> attrs_a =
        options.attrs_a.empty() ? all_column_names(a) : options.attrs_a;
    std::vector<std::string> attrs_b =
        options.attrs_b.empty() ? all_column_names(b) : options.attrs_b;

    LeakageAssessment assessment;
    assessment.report_a = uniqueness_report(a, attrs_a, options.small_ks);
    assessment.report_b = uniqueness_report(b, attrs_b, options.small_ks);

    Table merged = join(a, b, spec);
    if (merged.row_count() == 0) {
        throw Error(ErrorCategory::Assess, "empty join");
    }
    assessment.report_ab =
        uniqueness_report(merged, all_column_names(merged), options.small_ks);

    double u_a = assessment.report_a.distinct_ratio;
    double u_b = assessment.report_b.distinct_ratio;
    double u_ab = assessment.report_ab.distinct_ratio;
    assessment.baseline =
        options.baseline_mode == BaselineMode::Max ? std::max(u_a, u_b) : 1.0;
    assessment.signal = u_ab - assessment.baseline;
    assessment.overall_direction = direction(assessment.signal, options.epsilon);
    assessment.direction_a = direction(u_ab - u_a, options.epsilon);
    assessment.direction_b = direction(u_ab - u_b, options.epsilon);
    assessment.join_spec = spec;
    assessment.epsilon = options.epsilon;
    return assessment;
}

} // namespace joinguard
