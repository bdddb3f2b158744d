#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "joinguard/table.hpp"

namespace joinguard {

/// Stable byte encoding of a projected row tuple. Equal tuples encode
/// equally; distinct tuples (including Missing vs any token) never collide.
std::string encode_tuple(std::span<const CellValue> cells);

/// Encodes the tuple formed by the given columns of one row without
/// materializing an intermediate vector.
std::string encode_row_tuple(const Table& table, std::size_t row,
                             std::span<const std::size_t> columns);

/// Multiplicities of projected row tuples.
///   sum of groups counts = n_rows
///   sum over size_histogram of k * count(k) = n_rows
///   every count >= 1
struct GroupHistogram {
    std::unordered_map<std::string, std::size_t> groups;
    std::map<std::size_t, std::size_t> size_histogram;
    std::size_t n_rows = 0;
};

/// Identifiability summary of one table under one attribute set.
///   distinct_ratio = distinct_count / n_rows (the headline uniqueness)
///   singleton_ratio = singleton_count / n_rows
///   singleton_count <= distinct_count
///   min_group_size = 1 iff singleton_count >= 1
struct UniquenessReport {
    std::vector<std::string> attrs;
    std::size_t n_rows = 0;
    std::size_t distinct_count = 0;
    std::size_t singleton_count = 0;
    double distinct_ratio = 0.0;
    double singleton_ratio = 0.0;
    std::size_t min_group_size = 0;
    std::map<std::size_t, double> small_group_fractions;
};

/// Exact multiplicity of every projected tuple. Empty attrs yields a
/// single group of size n_rows. Empty table is a metric error.
GroupHistogram group_counts(const Table& table, std::span<const std::string> attrs);

UniquenessReport uniqueness_report(const Table& table, std::span<const std::string> attrs,
                                   std::vector<std::size_t> small_ks = {2, 5});

/// Same report computed from an existing histogram (avoids regrouping).
UniquenessReport uniqueness_report(const GroupHistogram& histogram,
                                   std::vector<std::string> attrs,
                                   std::vector<std::size_t> small_ks = {2, 5});

/// Minimum group size over all groups.
std::size_t k_anonymity(const Table& table, std::span<const std::string> attrs);

/// Fraction of rows belonging to groups of size <= k. k=1 equals
/// singleton_ratio; k >= n_rows yields 1.0. k must be >= 1.
double small_group_fraction(const Table& table, std::span<const std::string> attrs,
                            std::size_t k);

} // namespace joinguard
