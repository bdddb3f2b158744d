#include "joinguard/join.hpp"

#include <unordered_map>
#include <unordered_set>

#include "joinguard/metrics.hpp"

namespace joinguard {

const char* to_string(JoinKind kind) {
    switch (kind) {
        case JoinKind::Inner: return "inner";
        case JoinKind::Left: return "left";
        case JoinKind::Right: return "right";
    }
    return "unknown";
}

JoinKind parse_join_kind(const std::string& text) {
    if (text == "inner") return JoinKind::Inner;
    if (text == "left") return JoinKind::Left;
    if (text == "right") return JoinKind::Right;
    throw Error(ErrorCategory::Argument, "unknown join kind: " + text);
}

namespace {

struct ResolvedKeys {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

ResolvedKeys resolve_keys(const Table& a, const Table& b, const JoinSpec& spec) {
    if (spec.keys.empty()) {
        throw Error(ErrorCategory::Argument, "join requires at least one key pair");
    }
    std::unordered_set<std::string> left_seen;
    std::unordered_set<std::string> right_seen;
    ResolvedKeys resolved;
    resolved.left.reserve(spec.keys.size());
    resolved.right.reserve(spec.keys.size());
    for (const auto& [left_name, right_name] : spec.keys) {
        if (!left_seen.insert(left_name).second) {
            throw Error(ErrorCategory::Argument, "duplicate key column: " + left_name);
        }
        if (!right_seen.insert(right_name).second) {
            throw Error(ErrorCategory::Argument, "duplicate key column: " + right_name);
        }
        resolved.left.push_back(a.column_index(left_name));
        resolved.right.push_back(b.column_index(right_name));
    }
    return resolved;
}

/// Row key, or empty optional when any key cell is Missing.
bool row_key(const Table& table, std::size_t row, std::span<const std::size_t> columns,
             std::string& out) {
    for (std::size_t col : columns) {
        if (table.cell(row, col).is_missing()) return false;
    }
    out = encode_row_tuple(table, row, columns);
    return true;
}

struct ProbeIndex {
    std::unordered_map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::string> row_keys;
    std::vector<char> has_key;
};

ProbeIndex build_index(const Table& table, std::span<const std::size_t> columns) {
    ProbeIndex index;
    index.row_keys.resize(table.row_count());
    index.has_key.assign(table.row_count(), 0);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        std::string key;
        if (row_key(table, r, columns, key)) {
            index.has_key[r] = 1;
            index.groups[key].push_back(r);
            index.row_keys[r] = std::move(key);
        }
    }
    return index;
}

std::vector<std::size_t> non_key_columns(const Table& table,
                                         std::span<const std::size_t> key_columns) {
    std::unordered_set<std::size_t> keys(key_columns.begin(), key_columns.end());
    std::vector<std::size_t> rest;
    for (std::size_t c = 0; c < table.column_count(); ++c) {
        if (!keys.contains(c)) rest.push_back(c);
    }
    return rest;
}

} // namespace

std::size_t estimate_join_cardinality(const Table& a, const Table& b, const JoinSpec& spec) {
    ResolvedKeys keys = resolve_keys(a, b, spec);
    std::unordered_map<std::string, std::size_t> b_group_sizes;
    for (std::size_t r = 0; r < b.row_count(); ++r) {
        std::string key;
        if (row_key(b, r, keys.right, key)) {
            ++b_group_sizes[std::move(key)];
        }
    }
    std::size_t total = 0;
    for (std::size_t r = 0; r < a.row_count(); ++r) {
        std::string key;
        if (!row_key(a, r, keys.left, key)) continue;
        auto it = b_group_sizes.find(key);
        if (it != b_group_sizes.end()) total += it->second;
    }
    return total;
}

Table join(const Table& a, const Table& b, const JoinSpec& spec) {
    ResolvedKeys keys = resolve_keys(a, b, spec);
    std::vector<std::size_t> a_rest = non_key_columns(a, keys.left);
    std::vector<std::size_t> b_rest = non_key_columns(b, keys.right);

    std::vector<ColumnSpec> out_columns;
    out_columns.reserve(keys.left.size() + a_rest.size() + b_rest.size());
    std::unordered_set<std::string> out_names;
    auto add_column = [&](std::string name, ColumnRole role) {
        if (!out_names.insert(name).second) {
            throw Error(ErrorCategory::Join, "output column name collision: " + name);
        }
        out_columns.push_back({std::move(name), role});
    };
    for (std::size_t col : keys.left) {
        add_column(a.columns()[col].name, a.columns()[col].role);
    }
    for (std::size_t col : a_rest) {
        add_column(spec.left_prefix + a.columns()[col].name, a.columns()[col].role);
    }
    for (std::size_t col : b_rest) {
        add_column(spec.right_prefix + b.columns()[col].name, b.columns()[col].role);
    }

    ProbeIndex index = build_index(b, keys.right);

    // Sizing pass: exact output cardinality before any row materializes.
    std::size_t matched = 0;
    std::size_t unmatched_a = 0;
    std::unordered_set<std::string> touched_groups;
    for (std::size_t r = 0; r < a.row_count(); ++r) {
        std::string key;
        if (!row_key(a, r, keys.left, key)) {
            ++unmatched_a;
            continue;
        }
        auto it = index.groups.find(key);
        if (it == index.groups.end()) {
            ++unmatched_a;
            continue;
        }
        matched += it->second.size();
        touched_groups.insert(it->first);
    }
    std::size_t total = matched;
    if (spec.kind == JoinKind::Left) {
        total += unmatched_a;
    } else if (spec.kind == JoinKind::Right) {
        std::size_t matched_b = 0;
        for (const auto& key : touched_groups) {
            matched_b += index.groups.at(key).size();
        }
        total += b.row_count() - matched_b;
    }
    if (total > spec.max_output_rows) {
        throw Error(ErrorCategory::Join,
                    "join output would contain " + std::to_string(total) +
                        " rows, exceeding the cap of " + std::to_string(spec.max_output_rows));
    }

    std::vector<CellValue> cells;
    cells.reserve(total * out_columns.size());
    auto emit = [&](const std::size_t* a_row, const std::size_t* b_row) {
        if (a_row != nullptr) {
            for (std::size_t col : keys.left) cells.push_back(a.cell(*a_row, col));
        } else {
            for (std::size_t col : keys.right) cells.push_back(b.cell(*b_row, col));
        }
        for (std::size_t col : a_rest) {
            cells.push_back(a_row ? a.cell(*a_row, col) : CellValue::missing());
        }
        for (std::size_t col : b_rest) {
            cells.push_back(b_row ? b.cell(*b_row, col) : CellValue::missing());
        }
    };

    for (std::size_t r = 0; r < a.row_count(); ++r) {
        std::string key;
        if (!row_key(a, r, keys.left, key)) continue;
        auto it = index.groups.find(key);
        if (it == index.groups.end()) continue;
        for (std::size_t b_row : it->second) {
            emit(&r, &b_row);
        }
    }
    if (spec.kind == JoinKind::Left) {
        for (std::size_t r = 0; r < a.row_count(); ++r) {
            std::string key;
            if (row_key(a, r, keys.left, key) && index.groups.contains(key)) continue;
            emit(&r, nullptr);
        }
    } else if (spec.kind == JoinKind::Right) {
        for (std::size_t r = 0; r < b.row_count(); ++r) {
            if (index.has_key[r] && touched_groups.contains(index.row_keys[r])) continue;
            emit(nullptr, &r);
        }
    }
    return Table(std::move(out_columns), std::move(cells),
                 a.source_label().empty() || b.source_label().empty()
                     ? std::string{}
                     : a.source_label() + "+" + b.source_label());
}

} // namespace joinguard
