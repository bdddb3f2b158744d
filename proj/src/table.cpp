#include "joinguard/table.hpp"

#include <algorithm>
#include <cctype>

namespace joinguard {

const char* to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Argument: return "argument";
        case ErrorCategory::Ingest: return "ingest";
        case ErrorCategory::Lookup: return "lookup";
        case ErrorCategory::Metric: return "metric";
        case ErrorCategory::Join: return "join";
        case ErrorCategory::Assess: return "assess";
        case ErrorCategory::Train: return "train";
        case ErrorCategory::Persist: return "persist";
    }
    return "unknown";
}

Table::Table(std::vector<ColumnSpec> columns, std::vector<CellValue> cells,
             std::string source_label)
    : columns_(std::move(columns)),
      cells_(std::move(cells)),
      source_label_(std::move(source_label)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name.empty()) {
            throw Error(ErrorCategory::Argument, "column " + std::to_string(i) + " has an empty name");
        }
        auto [it, inserted] = index_by_name_.emplace(columns_[i].name, i);
        if (!inserted) {
            throw Error(ErrorCategory::Ingest, "duplicate column name: " + columns_[i].name);
        }
    }
    if (columns_.empty()) {
        if (!cells_.empty()) {
            throw Error(ErrorCategory::Argument, "cells present but no columns defined");
        }
        row_count_ = 0;
        return;
    }
    if (cells_.size() % columns_.size() != 0) {
        throw Error(ErrorCategory::Argument, "cell count is not a multiple of the column count");
    }
    row_count_ = cells_.size() / columns_.size();
}

Table Table::from_rows(std::vector<ColumnSpec> columns,
                       const std::vector<std::vector<CellValue>>& rows,
                       std::string source_label) {
    std::vector<CellValue> cells;
    cells.reserve(rows.size() * columns.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns.size()) {
            throw Error(ErrorCategory::Ingest,
                        "ragged row at row " + std::to_string(r + 1) + ": expected " +
                            std::to_string(columns.size()) + " fields, got " +
                            std::to_string(rows[r].size()));
        }
        cells.insert(cells.end(), rows[r].begin(), rows[r].end());
    }
    return Table(std::move(columns), std::move(cells), std::move(source_label));
}

std::size_t Table::column_index(std::string_view name) const {
    auto it = index_by_name_.find(std::string(name));
    if (it == index_by_name_.end()) {
        throw Error(ErrorCategory::Lookup, "unknown column: " + std::string(name));
    }
    return it->second;
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
    auto it = index_by_name_.find(std::string(name));
    if (it == index_by_name_.end()) return std::nullopt;
    return it->second;
}

CellValue canonicalize_value(std::string_view raw, const IngestOptions& options) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && is_space(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && is_space(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string token(raw.substr(begin, end - begin));
    if (token.empty() && options.empty_is_missing) {
        return CellValue::missing();
    }
    if (options.case_fold) {
        std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
    }
    return CellValue(std::move(token));
}

std::vector<std::vector<CellValue>> project(const Table& table,
                                            std::span<const std::string> attrs) {
    std::vector<std::size_t> indices;
    indices.reserve(attrs.size());
    for (const auto& name : attrs) {
        indices.push_back(table.column_index(name));
    }
    std::vector<std::vector<CellValue>> tuples;
    tuples.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        std::vector<CellValue> tuple;
        tuple.reserve(indices.size());
        for (std::size_t col : indices) {
            tuple.push_back(table.cell(r, col));
        }
        tuples.push_back(std::move(tuple));
    }
    return tuples;
}

} // namespace joinguard
