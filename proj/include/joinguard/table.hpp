#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "joinguard/error.hpp"

namespace joinguard {

/// One cell of a table: a canonical text token or the Missing sentinel.
/// Missing groups with other Missing cells but is distinct from every
/// token, including the empty string.
class CellValue {
public:
    CellValue() : missing_(true) {}
    explicit CellValue(std::string token) : missing_(false), token_(std::move(token)) {}

    static CellValue missing() { return CellValue{}; }

    bool is_missing() const { return missing_; }

    /// Token text; empty for Missing.
    const std::string& token() const { return token_; }

    bool operator==(const CellValue& other) const = default;
    auto operator<=>(const CellValue& other) const = default;

private:
    bool missing_;
    std::string token_;
};

struct CellValueHash {
    std::size_t operator()(const CellValue& cell) const {
        std::size_t h = std::hash<std::string>{}(cell.token());
        return cell.is_missing() ? ~h : h;
    }
};

enum class ColumnRole {
    QuasiIdentifier,
    Attribute,
    Identifier,
};

struct ColumnSpec {
    std::string name;
    ColumnRole role = ColumnRole::Attribute;
};

struct IngestOptions {
    char delimiter = ',';
    bool has_header = true;
    bool empty_is_missing = true;
    bool case_fold = false;
    std::vector<std::string> drop_columns;
};

/// Immutable rectangular grid of cells with named columns. Rows are stored
/// row-major in one flat vector. All accessors are const; tables can be
/// shared across threads freely.
class Table {
public:
    /// `cells` is row-major and must have size rows * columns.size().
    Table(std::vector<ColumnSpec> columns, std::vector<CellValue> cells,
          std::string source_label);

    static Table from_rows(std::vector<ColumnSpec> columns,
                           const std::vector<std::vector<CellValue>>& rows,
                           std::string source_label);

    std::size_t row_count() const { return row_count_; }
    std::size_t column_count() const { return columns_.size(); }
    const std::vector<ColumnSpec>& columns() const { return columns_; }
    const std::string& source_label() const { return source_label_; }

    const CellValue& cell(std::size_t row, std::size_t col) const {
        return cells_[row * columns_.size() + col];
    }

    std::span<const CellValue> row(std::size_t index) const {
        return {cells_.data() + index * columns_.size(), columns_.size()};
    }

    /// Index of a named column; throws a Lookup error for unknown names.
    std::size_t column_index(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

private:
    std::vector<ColumnSpec> columns_;
    std::vector<CellValue> cells_;
    std::string source_label_;
    std::size_t row_count_;
    std::unordered_map<std::string, std::size_t> index_by_name_;
};

/// Trims ASCII whitespace, maps the empty string to Missing when
/// `empty_is_missing` is set, lower-cases ASCII letters when `case_fold`
/// is set. Idempotent.
CellValue canonicalize_value(std::string_view raw, const IngestOptions& options);

/// Per-row tuples of the named columns, preserving row order and
/// multiplicity. Empty `attrs` yields one empty tuple per row.
std::vector<std::vector<CellValue>> project(const Table& table,
                                            std::span<const std::string> attrs);

} // namespace joinguard
