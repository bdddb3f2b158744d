#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "joinguard/assess.hpp"
#include "joinguard/join.hpp"
#include "joinguard/table.hpp"

namespace joinguard {

/// SplitMix64 finalizer; the fixed mixing function behind every derived
/// seed in this module.
std::uint64_t splitmix64(std::uint64_t x);

struct CountRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/// Knobs for the dataset-pair generator. Every generated table carries
/// age and gender columns (the join keys) plus sampled categorical
/// extras; a fraction of rows are copies of earlier rows, and a table
/// may gain a unique row-id column.
struct GeneratorParams {
    CountRange rows_a{100, 2000};
    CountRange rows_b{100, 2000};
    int age_lo = 18;
    int age_hi = 90;
    std::size_t gender_values = 2;
    CountRange extra_cols_a{1, 6};
    CountRange extra_cols_b{1, 6};
    CountRange extra_cardinality{2, 50};
    double duplicate_rate_lo = 0.0;
    double duplicate_rate_hi = 0.6;
    double id_column_prob = 0.3;
    /// Cap on the internal labeling joins; pairs above it are retried.
    std::size_t max_join_rows = 10'000'000;
};

/// Ranges must be non-empty, duplicate rates within [0, 0.9], and the
/// age interval wide enough to split into disjoint per-table bands.
void validate(const GeneratorParams& params);

/// Per-table knob values actually drawn for one generated table.
struct TableDraw {
    std::size_t rows = 0;
    std::size_t extra_cols = 0;
    double duplicate_rate = 0.0;
    double dirt_rate = 0.0;
    bool has_id = false;
};

struct GeneratedPair {
    Table a;
    Table b;
    JoinSpec spec;
    TableDraw draw_a;
    TableDraw draw_b;
};

/// Deterministic function of (params, pair_seed). The two tables share a
/// middle window of the age range where their rows can match; each table
/// also owns a private age band the other table never samples, and row
/// copies concentrate there. That split is what lets the post-join ratio
/// land on either side of the pre-join maximum.
GeneratedPair generate_pair(const GeneratorParams& params, std::uint64_t pair_seed);

struct LabeledExample {
    /// [u_a, u_b]: pre-join distinct ratios over all columns.
    std::vector<double> features;
    /// Post-join distinct ratio minus max(u_a, u_b).
    double target = 0.0;
    std::uint64_t pair_seed = 0;
    TableDraw draw_a;
    TableDraw draw_b;
    std::size_t join_rows = 0;
    std::size_t retries = 0;
};

struct LabeledCorpus {
    std::vector<LabeledExample> examples;
    std::uint64_t master_seed = 0;
    GeneratorParams params;
    /// Pairs abandoned after the retry budget (empty or exploding joins).
    std::size_t skipped = 0;
};

constexpr std::size_t kMaxPairRetries = 8;

/// Pair i uses seed master_seed XOR splitmix64(i); a pair whose join is
/// empty or over the row cap is retried with derived seeds up to
/// kMaxPairRetries times, then counted in `skipped`. Examples are
/// ordered by pair index.
LabeledCorpus generate_corpus(const GeneratorParams& params, std::size_t n_pairs,
                              std::uint64_t master_seed);

} // namespace joinguard
