#include "joinguard/csv.hpp"

#include <fstream>
#include <iterator>
#include <unordered_set>
#include <utility>
#include <vector>

namespace joinguard {

namespace {

/// Splits raw text into records of raw field strings. Quoted fields may
/// contain delimiters, quotes (doubled), and line breaks. LF, CRLF, and
/// lone CR all terminate a record; a trailing newline does not produce an
/// extra empty record.
std::vector<std::vector<std::string>> parse_records(const std::string& text, char delimiter) {
    std::vector<std::vector<std::string>> records;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        std::vector<std::string> record;
        bool record_done = false;
        while (!record_done) {
            std::string field;
            if (i < n && text[i] == '"') {
                ++i;
                bool closed = false;
                while (i < n) {
                    char c = text[i];
                    if (c == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            field.push_back('"');
                            i += 2;
                        } else {
                            ++i;
                            closed = true;
                            break;
                        }
                    } else {
                        field.push_back(c);
                        ++i;
                    }
                }
                if (!closed) {
                    throw Error(ErrorCategory::Ingest,
                                "unterminated quoted field at record " +
                                    std::to_string(records.size() + 1));
                }
                if (i < n && text[i] != delimiter && text[i] != '\n' && text[i] != '\r') {
                    throw Error(ErrorCategory::Ingest,
                                "unexpected character after closing quote at record " +
                                    std::to_string(records.size() + 1));
                }
            } else {
                while (i < n && text[i] != delimiter && text[i] != '\n' && text[i] != '\r') {
                    field.push_back(text[i]);
                    ++i;
                }
            }
            record.push_back(std::move(field));
            if (i >= n) {
                record_done = true;
            } else if (text[i] == delimiter) {
                ++i;
            } else if (text[i] == '\r') {
                i += (i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
                record_done = true;
            } else {
                ++i;
                record_done = true;
            }
        }
        records.push_back(std::move(record));
    }
    return records;
}

bool needs_quoting(const std::string& token, char delimiter) {
    for (char c : token) {
        if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

void write_field(std::ostream& out, const std::string& token, char delimiter) {
    if (!needs_quoting(token, delimiter)) {
        out << token;
        return;
    }
    out << '"';
    for (char c : token) {
        if (c == '"') out << "\"\"";
        else out << c;
    }
    out << '"';
}

} // namespace

Table load_table(std::istream& source, const IngestOptions& options, std::string source_label) {
    std::string text(std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>{});
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        text.erase(0, 3);
    }
    auto records = parse_records(text, options.delimiter);
    if (records.empty()) {
        throw Error(ErrorCategory::Ingest, "empty input: no records");
    }

    std::vector<ColumnSpec> columns;
    std::size_t first_data = 0;
    if (options.has_header) {
        columns.reserve(records[0].size());
        for (const auto& raw : records[0]) {
            CellValue name = canonicalize_value(raw, IngestOptions{});
            if (name.is_missing()) {
                throw Error(ErrorCategory::Ingest, "empty column name in header");
            }
            columns.push_back({name.token(), ColumnRole::Attribute});
        }
        first_data = 1;
    } else {
        columns.reserve(records[0].size());
        for (std::size_t c = 0; c < records[0].size(); ++c) {
            columns.push_back({"c" + std::to_string(c + 1), ColumnRole::Attribute});
        }
    }

    std::vector<std::vector<CellValue>> rows;
    rows.reserve(records.size() - first_data);
    for (std::size_t r = first_data; r < records.size(); ++r) {
        std::vector<CellValue> row;
        row.reserve(records[r].size());
        for (const auto& raw : records[r]) {
            row.push_back(canonicalize_value(raw, options));
        }
        rows.push_back(std::move(row));
    }
    Table table = Table::from_rows(std::move(columns), rows, std::move(source_label));

    if (options.drop_columns.empty()) {
        return table;
    }
    std::unordered_set<std::size_t> dropped;
    for (const auto& name : options.drop_columns) {
        dropped.insert(table.column_index(name));
    }
    std::vector<ColumnSpec> kept;
    std::vector<std::size_t> kept_indices;
    for (std::size_t c = 0; c < table.column_count(); ++c) {
        if (!dropped.contains(c)) {
            kept.push_back(table.columns()[c]);
            kept_indices.push_back(c);
        }
    }
    std::vector<CellValue> cells;
    cells.reserve(table.row_count() * kept_indices.size());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t c : kept_indices) {
            cells.push_back(table.cell(r, c));
        }
    }
    return Table(std::move(kept), std::move(cells), table.source_label());
}

Table load_table_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::Ingest, "cannot open file: " + path);
    }
    return load_table(in, options, path);
}

void write_csv(const Table& table, std::ostream& out, char delimiter) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
        if (c > 0) out << delimiter;
        write_field(out, table.columns()[c].name, delimiter);
    }
    out << '\n';
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t c = 0; c < table.column_count(); ++c) {
            if (c > 0) out << delimiter;
            const CellValue& cell = table.cell(r, c);
            if (!cell.is_missing()) {
                write_field(out, cell.token(), delimiter);
            }
        }
        out << '\n';
    }
}

} // namespace joinguard
