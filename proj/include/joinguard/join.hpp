#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "joinguard/table.hpp"

namespace joinguard {

enum class JoinKind {
    Inner,
    Left,
    Right,
};

const char* to_string(JoinKind kind);
JoinKind parse_join_kind(const std::string& text);

/// Multi-key equality join description. Key pairs are (left column,
/// right column); duplicates on either side are rejected.
struct JoinSpec {
    std::vector<std::pair<std::string, std::string>> keys;
    JoinKind kind = JoinKind::Inner;
    std::size_t max_output_rows = 10'000'000;
    std::string left_prefix = "a_";
    std::string right_prefix = "b_";
};

/// Hash join on the key pairs. Missing key cells never match anything,
/// including other Missing cells.
///
/// Output schema: key columns once under their left names, then the
/// non-key columns of each input under the configured prefix. A name
/// collision in that schema is a join error.
///
/// Row order: matched pairs ordered by (left row, right row); for
/// left/right kinds, unmatched rows follow in source order with Missing
/// fill on the other side (right-side survivors keep their own key
/// values in the key columns).
///
/// The output size is computed up front from key-group cardinalities;
/// exceeding max_output_rows is a join error, nothing is materialized.
Table join(const Table& a, const Table& b, const JoinSpec& spec);

/// Exact inner-join output size, Σ_v count_a(v) × count_b(v), computed
/// from key groups without materializing any rows.
std::size_t estimate_join_cardinality(const Table& a, const Table& b, const JoinSpec& spec);

} // namespace joinguard
