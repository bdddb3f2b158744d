#include "joinguard/metrics.hpp"

#include <cstdint>

namespace joinguard {

namespace {

void append_cell(std::string& out, const CellValue& cell) {
    if (cell.is_missing()) {
        out.push_back('M');
        out.append(4, '\0');
        return;
    }
    out.push_back('V');
    const std::string& token = cell.token();
    auto length = static_cast<std::uint32_t>(token.size());
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<char>((length >> shift) & 0xFF));
    }
    out.append(token);
}

std::vector<std::size_t> resolve_columns(const Table& table,
                                         std::span<const std::string> attrs) {
    std::vector<std::size_t> columns;
    columns.reserve(attrs.size());
    for (const auto& name : attrs) {
        columns.push_back(table.column_index(name));
    }
    return columns;
}

/// Σ size * count over groups of size <= k, divided by n_rows.
double fraction_at_most(const GroupHistogram& histogram, std::size_t k) {
    std::size_t covered = 0;
    for (const auto& [size, group_count] : histogram.size_histogram) {
        if (size > k) break;
        covered += size * group_count;
    }
    return static_cast<double>(covered) / static_cast<double>(histogram.n_rows);
}

} // namespace

std::string encode_tuple(std::span<const CellValue> cells) {
    std::string key;
    for (const CellValue& cell : cells) {
        append_cell(key, cell);
    }
    return key;
}

std::string encode_row_tuple(const Table& table, std::size_t row,
                             std::span<const std::size_t> columns) {
    std::string key;
    for (std::size_t col : columns) {
        append_cell(key, table.cell(row, col));
    }
    return key;
}

GroupHistogram group_counts(const Table& table, std::span<const std::string> attrs) {
    if (table.row_count() == 0) {
        throw Error(ErrorCategory::Metric, "empty table");
    }
    auto columns = resolve_columns(table, attrs);
    GroupHistogram histogram;
    histogram.n_rows = table.row_count();
    histogram.groups.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        ++histogram.groups[encode_row_tuple(table, r, columns)];
    }
    for (const auto& [key, count] : histogram.groups) {
        ++histogram.size_histogram[count];
    }
    return histogram;
}

UniquenessReport uniqueness_report(const GroupHistogram& histogram,
                                   std::vector<std::string> attrs,
                                   std::vector<std::size_t> small_ks) {
    UniquenessReport report;
    report.attrs = std::move(attrs);
    report.n_rows = histogram.n_rows;
    report.distinct_count = histogram.groups.size();
    auto singleton_it = histogram.size_histogram.find(1);
    report.singleton_count =
        singleton_it == histogram.size_histogram.end() ? 0 : singleton_it->second;
    report.distinct_ratio =
        static_cast<double>(report.distinct_count) / static_cast<double>(report.n_rows);
    report.singleton_ratio =
        static_cast<double>(report.singleton_count) / static_cast<double>(report.n_rows);
    report.min_group_size = histogram.size_histogram.begin()->first;
    for (std::size_t k : small_ks) {
        if (k < 1) {
            throw Error(ErrorCategory::Argument, "threshold must be >= 1");
        }
        report.small_group_fractions[k] = fraction_at_most(histogram, k);
    }
    return report;
}

UniquenessReport uniqueness_report(const Table& table, std::span<const std::string> attrs,
                                   std::vector<std::size_t> small_ks) {
    return uniqueness_report(group_counts(table, attrs),
                             std::vector<std::string>(attrs.begin(), attrs.end()),
                             std::move(small_ks));
}

std::size_t k_anonymity(const Table& table, std::span<const std::string> attrs) {
    return group_counts(table, attrs).size_histogram.begin()->first;
}

double small_group_fraction(const Table& table, std::span<const std::string> attrs,
                            std::size_t k) {
    if (k < 1) {
        throw Error(ErrorCategory::Argument, "threshold must be >= 1");
    }
    return fraction_at_most(group_counts(table, attrs), k);
}

} // namespace joinguard
