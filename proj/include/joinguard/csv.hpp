#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "joinguard/table.hpp"

namespace joinguard {

/// Parses RFC-4180-style delimited text (quoted fields, doubled quotes,
/// embedded delimiters and newlines, LF or CRLF endings, UTF-8 only).
/// Cells are canonicalized per the options; columns named in
/// `drop_columns` are removed; every column gets role=Attribute.
/// Without a header, columns are named c1..cN.
Table load_table(std::istream& source, const IngestOptions& options,
                 std::string source_label = "");

Table load_table_file(const std::string& path, const IngestOptions& options);

/// Inverse of load_table under default options: Missing becomes an empty
/// field, fields are quoted only when they contain the delimiter, a quote,
/// or a line break.
void write_csv(const Table& table, std::ostream& out, char delimiter = ',');

} // namespace joinguard
