#pragma once

#include <istream>
#include <string>

#include "json.hpp"

#include "joinguard/assess.hpp"
#include "joinguard/eval.hpp"
#include "joinguard/metrics.hpp"
#include "joinguard/synth.hpp"

namespace joinguard {

/// All serializers emit ordered objects with a fixed field order so that
/// identical inputs produce byte-identical documents.
nlohmann::ordered_json to_json(const UniquenessReport& report);
nlohmann::ordered_json to_json(const JoinSpec& spec);
nlohmann::ordered_json to_json(const LeakageAssessment& assessment);
nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const LabeledExample& example);

/// Shortest round-trip decimal form of a double (the same rendering the
/// JSON serializer uses), for CSV cells.
std::string number_token(double value);

/// JSON-lines corpus: one LabeledExample per line. Corpus-level fields
/// (master_seed, params, skipped) are in-memory only; readers recover
/// examples, which is all training and evaluation consume.
std::string corpus_to_jsonl(const LabeledCorpus& corpus);
LabeledCorpus corpus_from_jsonl(std::istream& in);
void write_corpus_file(const LabeledCorpus& corpus, const std::string& path);
LabeledCorpus read_corpus_file(const std::string& path);

} // namespace joinguard
