#include "joinguard/synth.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

namespace joinguard {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

constexpr std::uint64_t kLeftStream = 0x517CC1B727220A95ULL;
constexpr std::uint64_t kRightStream = 0x2545F4914F6CDD1DULL;

/// Draws use raw engine output so the values depend only on the engine's
/// specified behavior, not on a library's distribution internals.
std::size_t bounded(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

int bounded_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Age geography of one table: a narrow private band the other table
/// never samples, and the window both tables share.
struct AgeBands {
    int private_lo;
    int private_hi;
    int window_lo;
    int window_hi;
};

AgeBands age_bands(const GeneratorParams& params, bool left) {
    int span = params.age_hi - params.age_lo + 1;
    int guard = std::max(1, span / 6);
    int narrow = std::max(1, span / 18);
    AgeBands bands;
    bands.window_lo = params.age_lo + guard;
    bands.window_hi = params.age_hi - guard;
    if (left) {
        bands.private_lo = params.age_lo;
        bands.private_hi = params.age_lo + narrow - 1;
    } else {
        bands.private_lo = params.age_hi - narrow + 1;
        bands.private_hi = params.age_hi;
    }
    return bands;
}

/// Fraction of copies redirected at window rows; keeps some duplicated
/// rows joinable so a pair with a fully unique partner still loses
/// uniqueness through the join.
constexpr double kWindowCopyShare = 0.1;

Table generate_table(const GeneratorParams& params, std::mt19937_64& rng, bool left,
                     std::string label, TableDraw& draw) {
    const AgeBands bands = age_bands(params, left);

    const CountRange& row_range = left ? params.rows_a : params.rows_b;
    const std::size_t rows = bounded(rng, row_range.lo, row_range.hi);

    const std::size_t extra_cols =
        bounded(rng, left ? params.extra_cols_a.lo : params.extra_cols_b.lo,
                left ? params.extra_cols_a.hi : params.extra_cols_b.hi);
    std::vector<std::size_t> cardinality(extra_cols);
    for (std::size_t j = 0; j < extra_cols; ++j) {
        cardinality[j] = bounded(rng, params.extra_cardinality.lo, params.extra_cardinality.hi);
    }

    const double duplicate_rate =
        params.duplicate_rate_lo +
        unit_real(rng) * (params.duplicate_rate_hi - params.duplicate_rate_lo);
    const double dirt_rate = 0.15 + unit_real(rng) * 0.5;

    std::size_t n_copies = static_cast<std::size_t>(duplicate_rate * static_cast<double>(rows) + 0.5);
    if (n_copies >= rows) n_copies = rows - 1;
    const std::size_t n_base = rows - n_copies;

    std::vector<std::vector<CellValue>> table_rows;
    table_rows.reserve(rows);
    std::vector<std::size_t> private_rows;
    std::vector<std::size_t> window_rows;
    for (std::size_t i = 0; i < n_base; ++i) {
        const bool is_private = unit_real(rng) < dirt_rate;
        std::vector<CellValue> row;
        row.reserve(2 + extra_cols);
        const int age = is_private ? bounded_int(rng, bands.private_lo, bands.private_hi)
                                   : bounded_int(rng, bands.window_lo, bands.window_hi);
        row.emplace_back(std::to_string(age));
        row.emplace_back("g" + std::to_string(bounded(rng, 0, params.gender_values - 1)));
        for (std::size_t j = 0; j < extra_cols; ++j) {
            const std::size_t card = is_private ? std::min<std::size_t>(cardinality[j], 2)
                                                : cardinality[j];
            row.emplace_back("v" + std::to_string(bounded(rng, 0, card - 1)));
        }
        (is_private ? private_rows : window_rows).push_back(table_rows.size());
        table_rows.push_back(std::move(row));
    }

    if (n_copies > 0) {
        std::size_t window_copies =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         kWindowCopyShare * static_cast<double>(n_copies) + 0.5));
        window_copies = std::min(window_copies, n_copies);
        const std::size_t private_copies = n_copies - window_copies;
        auto copy_from = [&](const std::vector<std::size_t>& preferred,
                             const std::vector<std::size_t>& fallback) {
            const auto& pool = preferred.empty() ? fallback : preferred;
            const std::size_t source = pool[bounded(rng, 0, pool.size() - 1)];
            table_rows.push_back(table_rows[source]);
        };
        for (std::size_t i = 0; i < private_copies; ++i) {
            copy_from(private_rows, window_rows);
        }
        for (std::size_t i = 0; i < window_copies; ++i) {
            copy_from(window_rows, private_rows);
        }
    }

    for (std::size_t i = rows - 1; i > 0; --i) {
        const std::size_t j = bounded(rng, 0, i);
        std::swap(table_rows[i], table_rows[j]);
    }

    const bool has_id = unit_real(rng) < params.id_column_prob;

    std::vector<ColumnSpec> columns;
    columns.push_back({"age", ColumnRole::QuasiIdentifier});
    columns.push_back({"gender", ColumnRole::QuasiIdentifier});
    for (std::size_t j = 0; j < extra_cols; ++j) {
        columns.push_back({"x" + std::to_string(j + 1), ColumnRole::Attribute});
    }
    if (has_id) {
        columns.push_back({"row_id", ColumnRole::Identifier});
        for (std::size_t i = 0; i < rows; ++i) {
            table_rows[i].emplace_back("r" + std::to_string(i));
        }
    }

    draw.rows = rows;
    draw.extra_cols = extra_cols;
    draw.duplicate_rate = duplicate_rate;
    draw.dirt_rate = dirt_rate;
    draw.has_id = has_id;
    return Table::from_rows(std::move(columns), table_rows, std::move(label));
}

} // namespace

void validate(const GeneratorParams& params) {
    auto check_range = [](const CountRange& range, const char* name, std::size_t min_lo) {
        if (range.lo < min_lo || range.lo > range.hi) {
            throw Error(ErrorCategory::Argument, std::string("invalid range for ") + name);
        }
    };
    check_range(params.rows_a, "rows_a", 1);
    check_range(params.rows_b, "rows_b", 1);
    check_range(params.extra_cols_a, "extra_cols_a", 0);
    check_range(params.extra_cols_b, "extra_cols_b", 0);
    check_range(params.extra_cardinality, "extra_cardinality", 1);
    if (params.gender_values < 1) {
        throw Error(ErrorCategory::Argument, "gender_values must be >= 1");
    }
    if (params.age_lo > params.age_hi || params.age_hi - params.age_lo + 1 < 9) {
        throw Error(ErrorCategory::Argument,
                    "age range must span at least 9 values to form disjoint bands");
    }
    if (params.duplicate_rate_lo < 0.0 || params.duplicate_rate_lo > params.duplicate_rate_hi ||
        params.duplicate_rate_hi > 0.9) {
        throw Error(ErrorCategory::Argument, "duplicate rates must satisfy 0 <= lo <= hi <= 0.9");
    }
    if (params.id_column_prob < 0.0 || params.id_column_prob > 1.0) {
        throw Error(ErrorCategory::Argument, "id_column_prob must lie in [0, 1]");
    }
    if (params.max_join_rows < 1) {
        throw Error(ErrorCategory::Argument, "max_join_rows must be >= 1");
    }
}

GeneratedPair generate_pair(const GeneratorParams& params, std::uint64_t pair_seed) {
    validate(params);
    std::mt19937_64 rng_a(splitmix64(pair_seed ^ kLeftStream));
    std::mt19937_64 rng_b(splitmix64(pair_seed ^ kRightStream));
    TableDraw draw_a;
    TableDraw draw_b;
    Table a = generate_table(params, rng_a, true, "synth-a", draw_a);
    Table b = generate_table(params, rng_b, false, "synth-b", draw_b);
    JoinSpec spec;
    spec.keys = {{"age", "age"}, {"gender", "gender"}};
    spec.max_output_rows = params.max_join_rows;
    return GeneratedPair{std::move(a), std::move(b), std::move(spec), draw_a, draw_b};
}

LabeledCorpus generate_corpus(const GeneratorParams& params, std::size_t n_pairs,
                              std::uint64_t master_seed) {
    validate(params);
    if (n_pairs < 1) {
        throw Error(ErrorCategory::Argument, "n_pairs must be >= 1");
    }
    LabeledCorpus corpus;
    corpus.master_seed = master_seed;
    corpus.params = params;
    corpus.examples.reserve(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const std::uint64_t base_seed = master_seed ^ splitmix64(i);
        bool labeled = false;
        for (std::size_t attempt = 0; attempt <= kMaxPairRetries && !labeled; ++attempt) {
            const std::uint64_t seed =
                attempt == 0 ? base_seed : splitmix64(base_seed ^ splitmix64(attempt));
            GeneratedPair pair = generate_pair(params, seed);
            LeakageAssessment assessment;
            try {
                assessment = assess_pair(pair.a, pair.b, pair.spec);
            } catch (const Error& error) {
                if (error.category() == ErrorCategory::Join ||
                    error.category() == ErrorCategory::Assess) {
                    continue;
                }
                throw;
            }
            LabeledExample example;
            example.features = {assessment.report_a.distinct_ratio,
                                assessment.report_b.distinct_ratio};
            example.target = assessment.signal;
            example.pair_seed = seed;
            example.draw_a = pair.draw_a;
            example.draw_b = pair.draw_b;
            example.join_rows = assessment.report_ab.n_rows;
            example.retries = attempt;
            corpus.examples.push_back(std::move(example));
            labeled = true;
        }
        if (!labeled) {
            ++corpus.skipped;
        }
    }
    return corpus;
}

} // namespace joinguard
