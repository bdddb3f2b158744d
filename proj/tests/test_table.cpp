#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "joinguard/csv.hpp"
#include "joinguard/error.hpp"
#include "joinguard/table.hpp"
#include "oracle.hpp"

using namespace joinguard;
using oracle::capture;
using oracle::M;
using oracle::V;

TEST_SUITE_BEGIN("table");

TEST_CASE("cell values compare missing apart from every token") {
    CHECK(CellValue::missing() == CellValue::missing());
    CHECK(V("") != M());
    CHECK(V("a") != M());
    CHECK(V("a") == V("a"));
    CHECK(V("a") != V("b"));
    CHECK(CellValue{}.is_missing());
    CHECK(M().token().empty());
}

TEST_CASE("canonicalize trims, maps empty to missing, folds case on request") {
    IngestOptions options;
    CHECK(canonicalize_value(" 30 ", options) == V("30"));
    CHECK(canonicalize_value("\t a b \r", options) == V("a b"));
    CHECK(canonicalize_value("", options).is_missing());
    CHECK(canonicalize_value("   ", options).is_missing());

    options.empty_is_missing = false;
    CHECK(canonicalize_value("", options) == V(""));
    CHECK(canonicalize_value("  ", options) == V(""));

    options = IngestOptions{};
    options.case_fold = true;
    CHECK(canonicalize_value("MiXeD", options) == V("mixed"));
    CHECK(canonicalize_value(" F ", options) == V("f"));

    SUBCASE("idempotent") {
        IngestOptions folded;
        folded.case_fold = true;
        for (const char* raw : {" 30 ", "MiXeD", "", "a  b"}) {
            const CellValue once = canonicalize_value(raw, folded);
            if (once.is_missing()) continue;
            CHECK(canonicalize_value(once.token(), folded) == once);
        }
    }
}

TEST_CASE("table construction validates shape and names") {
    const auto ragged = capture([] {
        Table::from_rows({{"a", ColumnRole::Attribute}, {"b", ColumnRole::Attribute}},
                         {{V("1"), V("2")}, {V("3")}}, "t");
    });
    CHECK(ragged.is(ErrorCategory::Ingest, "ragged row at row 2"));

    const auto duplicate = capture([] {
        Table::from_rows({{"a", {}}, {"a", {}}}, {{V("1"), V("2")}}, "t");
    });
    CHECK(duplicate.is(ErrorCategory::Ingest, "duplicate column name: a"));

    const auto unnamed = capture([] { Table::from_rows({{"", {}}}, {{V("1")}}, "t"); });
    CHECK(unnamed.is(ErrorCategory::Argument, "empty name"));

    const auto misshapen = capture([] {
        Table({{"a", {}}, {"b", {}}}, {V("1"), V("2"), V("3")}, "t");
    });
    CHECK(misshapen.is(ErrorCategory::Argument, "not a multiple"));
}

TEST_CASE("column lookup by name") {
    const Table t = oracle::make_table({"age", "gender"}, {{V("30"), V("m")}});
    CHECK(t.column_index("age") == 0);
    CHECK(t.column_index("gender") == 1);
    CHECK(t.find_column("gender") == std::size_t{1});
    CHECK_FALSE(t.find_column("zip").has_value());
    const auto unknown = capture([&] { t.column_index("zip"); });
    CHECK(unknown.is(ErrorCategory::Lookup, "unknown column: zip"));
}

TEST_CASE("project keeps duplicates and row order") {
    const Table t = oracle::make_table({"age", "gender", "note"},
                                       {{V("30"), V("m"), V("x")},
                                        {V("30"), V("m"), V("y")},
                                        {V("40"), V("f"), V("z")}});
    const std::vector<std::string> attrs = {"gender", "age"};
    const auto tuples = project(t, attrs);
    REQUIRE(tuples.size() == 3);
    CHECK(tuples[0] == std::vector<CellValue>{V("m"), V("30")});
    CHECK(tuples[1] == std::vector<CellValue>{V("m"), V("30")});
    CHECK(tuples[2] == std::vector<CellValue>{V("f"), V("40")});

    const std::vector<std::string> none;
    const auto empties = project(t, none);
    REQUIRE(empties.size() == 3);
    for (const auto& tuple : empties) CHECK(tuple.empty());

    const std::vector<std::string> bad = {"age", "zip"};
    CHECK(capture([&] { project(t, bad); }).is(ErrorCategory::Lookup, "unknown column: zip"));
}

TEST_CASE("csv parses plain and quoted fields") {
    std::istringstream in("age,gender\n30,M\n40,F\n");
    const Table t = load_table(in, {});
    REQUIRE(t.row_count() == 2);
    REQUIRE(t.column_count() == 2);
    CHECK(t.columns()[0].name == "age");
    CHECK(t.cell(0, 0) == V("30"));
    CHECK(t.cell(1, 1) == V("F"));

    std::istringstream quoted(
        "name,note\n\"Smith, Jane\",\"says \"\"hi\"\"\"\n\"two\nlines\",plain\n");
    const Table q = load_table(quoted, {});
    REQUIRE(q.row_count() == 2);
    CHECK(q.cell(0, 0) == V("Smith, Jane"));
    CHECK(q.cell(0, 1) == V("says \"hi\""));
    CHECK(q.cell(1, 0) == V("two\nlines"));
}

TEST_CASE("csv handles crlf, bom, and missing trailing newline") {
    std::istringstream crlf("a,b\r\n1,2\r\n3,4");
    const Table t = load_table(crlf, {});
    REQUIRE(t.row_count() == 2);
    CHECK(t.cell(1, 1) == V("4"));

    std::istringstream bom("\xEF\xBB\xBFk\n1\n");
    const Table b = load_table(bom, {});
    CHECK(b.columns()[0].name == "k");
    CHECK(b.cell(0, 0) == V("1"));
}

TEST_CASE("csv canonicalizes cells and header names") {
    std::istringstream in(" age , gender \n 30 ,\n");
    const Table t = load_table(in, {});
    CHECK(t.columns()[0].name == "age");
    CHECK(t.columns()[1].name == "gender");
    CHECK(t.cell(0, 0) == V("30"));
    CHECK(t.cell(0, 1).is_missing());

    IngestOptions keep_empty;
    keep_empty.empty_is_missing = false;
    std::istringstream in2("a\n\"\"\n");
    const Table t2 = load_table(in2, keep_empty);
    CHECK(t2.cell(0, 0) == V(""));

    IngestOptions fold;
    fold.case_fold = true;
    std::istringstream in3("g\nF\n");
    CHECK(load_table(in3, fold).cell(0, 0) == V("f"));
}

TEST_CASE("csv without header names columns c1..cN") {
    IngestOptions options;
    options.has_header = false;
    std::istringstream in("1,2,3\n4,5,6\n");
    const Table t = load_table(in, options);
    REQUIRE(t.column_count() == 3);
    CHECK(t.columns()[0].name == "c1");
    CHECK(t.columns()[2].name == "c3");
    CHECK(t.row_count() == 2);
}

TEST_CASE("csv drop columns removes named columns") {
    IngestOptions options;
    options.drop_columns = {"note"};
    std::istringstream in("age,note,gender\n30,secret,m\n");
    const Table t = load_table(in, options);
    REQUIRE(t.column_count() == 2);
    CHECK(t.columns()[0].name == "age");
    CHECK(t.columns()[1].name == "gender");
    CHECK(t.cell(0, 1) == V("m"));

    IngestOptions bad;
    bad.drop_columns = {"zip"};
    std::istringstream in2("age\n30\n");
    CHECK(capture([&] { load_table(in2, bad); })
              .is(ErrorCategory::Lookup, "unknown column: zip"));
}

TEST_CASE("csv rejects malformed input") {
    std::istringstream empty("");
    CHECK(capture([&] { load_table(empty, {}); }).is(ErrorCategory::Ingest, "empty input"));

    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK(capture([&] { load_table(ragged, {}); })
              .is(ErrorCategory::Ingest, "ragged row at row 2"));

    std::istringstream unterminated("a\n\"oops\n");
    CHECK(capture([&] { load_table(unterminated, {}); })
              .is(ErrorCategory::Ingest, "unterminated quoted field"));

    std::istringstream trailing("a,b\n\"x\"y,2\n");
    CHECK(capture([&] { load_table(trailing, {}); })
              .is(ErrorCategory::Ingest, "after closing quote"));

    std::istringstream blank_header(",b\n1,2\n");
    CHECK(capture([&] { load_table(blank_header, {}); })
              .is(ErrorCategory::Ingest, "empty column name"));
}

TEST_CASE("csv semicolon delimiter") {
    IngestOptions options;
    options.delimiter = ';';
    std::istringstream in("a;b\n1;2,5\n");
    const Table t = load_table(in, options);
    REQUIRE(t.column_count() == 2);
    CHECK(t.cell(0, 1) == V("2,5"));
}

TEST_CASE("csv write and reload round trip") {
    const Table t = oracle::make_table({"age", "note"},
                                       {{V("30"), V("plain")},
                                        {V("40"), V("a,b")},
                                        {M(), V("say \"hi\"")},
                                        {V("50"), V("two\nlines")}});
    std::ostringstream out;
    write_csv(t, out);
    std::istringstream back(out.str());
    const Table r = load_table(back, {});
    REQUIRE(r.row_count() == t.row_count());
    REQUIRE(r.column_count() == t.column_count());
    for (std::size_t row = 0; row < t.row_count(); ++row) {
        for (std::size_t col = 0; col < t.column_count(); ++col) {
            CHECK(r.cell(row, col) == t.cell(row, col));
        }
    }
    CHECK(out.str().substr(0, 9) == "age,note\n");
    CHECK(out.str().find("\"a,b\"") != std::string::npos);
}

TEST_SUITE_END();
