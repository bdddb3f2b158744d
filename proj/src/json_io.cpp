#include "joinguard/json_io.hpp"

#include <fstream>
#include <sstream>

namespace joinguard {

namespace {

nlohmann::ordered_json ratio_entry(double value, const char* interpretation) {
    return nlohmann::ordered_json{{"value", value}, {"interpretation", interpretation}};
}

nlohmann::ordered_json to_json(const TableDraw& draw) {
    return nlohmann::ordered_json{{"extra_cols", draw.extra_cols},
                                  {"duplicate_rate", draw.duplicate_rate},
                                  {"dirt_rate", draw.dirt_rate},
                                  {"has_id", draw.has_id}};
}

[[noreturn]] void corpus_error(std::size_t line_number, const std::string& detail) {
    throw Error(ErrorCategory::Ingest,
                "corpus line " + std::to_string(line_number) + ": " + detail);
}

void read_draw(const nlohmann::json& meta, const char* key, TableDraw& draw,
               std::size_t line_number) {
    if (!meta.contains(key)) return;
    const auto& doc = meta.at(key);
    if (!doc.is_object()) corpus_error(line_number, std::string(key) + " is not an object");
    if (doc.contains("extra_cols")) draw.extra_cols = doc.at("extra_cols").get<std::size_t>();
    if (doc.contains("duplicate_rate")) draw.duplicate_rate = doc.at("duplicate_rate").get<double>();
    if (doc.contains("dirt_rate")) draw.dirt_rate = doc.at("dirt_rate").get<double>();
    if (doc.contains("has_id")) draw.has_id = doc.at("has_id").get<bool>();
}

} // namespace

nlohmann::ordered_json to_json(const UniquenessReport& report) {
    nlohmann::ordered_json doc;
    doc["attrs"] = report.attrs;
    doc["n_rows"] = report.n_rows;
    doc["distinct_count"] = report.distinct_count;
    doc["singleton_count"] = report.singleton_count;
    doc["distinct_ratio"] = ratio_entry(report.distinct_ratio, "distinct");
    doc["singleton_ratio"] = ratio_entry(report.singleton_ratio, "singleton");
    doc["min_group_size"] = report.min_group_size;
    nlohmann::ordered_json fractions = nlohmann::ordered_json::object();
    for (const auto& [k, fraction] : report.small_group_fractions) {
        fractions[std::to_string(k)] = fraction;
    }
    doc["small_group_fractions"] = std::move(fractions);
    return doc;
}

nlohmann::ordered_json to_json(const JoinSpec& spec) {
    nlohmann::ordered_json keys = nlohmann::ordered_json::array();
    for (const auto& [left, right] : spec.keys) {
        keys.push_back(nlohmann::ordered_json{{"left", left}, {"right", right}});
    }
    return nlohmann::ordered_json{{"keys", std::move(keys)},
                                  {"kind", to_string(spec.kind)},
                                  {"max_output_rows", spec.max_output_rows},
                                  {"left_prefix", spec.left_prefix},
                                  {"right_prefix", spec.right_prefix}};
}

nlohmann::ordered_json to_json(const LeakageAssessment& assessment) {
    nlohmann::ordered_json doc;
    doc["report_a"] = to_json(assessment.report_a);
    doc["report_b"] = to_json(assessment.report_b);
    doc["report_ab"] = to_json(assessment.report_ab);
    doc["baseline"] = assessment.baseline;
    doc["signal"] = assessment.signal;
    doc["overall_direction"] = to_string(assessment.overall_direction);
    doc["direction_a"] = to_string(assessment.direction_a);
    doc["direction_b"] = to_string(assessment.direction_b);
    doc["join_spec"] = to_json(assessment.join_spec);
    doc["epsilon"] = assessment.epsilon;
    return doc;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["n"] = report.n;
    doc["direction_accuracy"] = report.direction_accuracy;
    doc["baseline_direction_accuracy"] = report.baseline_direction_accuracy;
    doc["mae"] = report.mae;
    doc["rmse"] = report.rmse;
    doc["spearman_u_vs_signal"] = report.spearman_u_vs_signal;
    doc["epsilon"] = report.epsilon;
    return doc;
}

nlohmann::ordered_json to_json(const LabeledExample& example) {
    nlohmann::ordered_json doc;
    doc["features"] = example.features;
    doc["target"] = example.target;
    doc["pair_seed"] = example.pair_seed;
    doc["meta"] = nlohmann::ordered_json{{"rows_a", example.draw_a.rows},
                                         {"rows_b", example.draw_b.rows},
                                         {"join_rows", example.join_rows},
                                         {"retries", example.retries},
                                         {"draw_a", to_json(example.draw_a)},
                                         {"draw_b", to_json(example.draw_b)}};
    return doc;
}

std::string number_token(double value) {
    return nlohmann::json(value).dump();
}

std::string corpus_to_jsonl(const LabeledCorpus& corpus) {
    std::string out;
    for (const LabeledExample& example : corpus.examples) {
        out += to_json(example).dump();
        out += '\n';
    }
    return out;
}

LabeledCorpus corpus_from_jsonl(std::istream& in) {
    LabeledCorpus corpus;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            corpus_error(line_number, "malformed JSON");
        }
        LabeledExample example;
        if (!doc.contains("features") || !doc.at("features").is_array() ||
            doc.at("features").empty()) {
            corpus_error(line_number, "missing features array");
        }
        for (const auto& value : doc.at("features")) {
            if (!value.is_number()) corpus_error(line_number, "non-numeric feature");
            example.features.push_back(value.get<double>());
        }
        if (!doc.contains("target") || !doc.at("target").is_number()) {
            corpus_error(line_number, "missing numeric target");
        }
        example.target = doc.at("target").get<double>();
        if (doc.contains("pair_seed")) {
            if (!doc.at("pair_seed").is_number_unsigned()) {
                corpus_error(line_number, "pair_seed is not an unsigned integer");
            }
            example.pair_seed = doc.at("pair_seed").get<std::uint64_t>();
        }
        if (doc.contains("meta")) {
            const auto& meta = doc.at("meta");
            if (!meta.is_object()) corpus_error(line_number, "meta is not an object");
            try {
                if (meta.contains("rows_a")) example.draw_a.rows = meta.at("rows_a").get<std::size_t>();
                if (meta.contains("rows_b")) example.draw_b.rows = meta.at("rows_b").get<std::size_t>();
                if (meta.contains("join_rows")) example.join_rows = meta.at("join_rows").get<std::size_t>();
                if (meta.contains("retries")) example.retries = meta.at("retries").get<std::size_t>();
                read_draw(meta, "draw_a", example.draw_a, line_number);
                read_draw(meta, "draw_b", example.draw_b, line_number);
            } catch (const nlohmann::json::exception&) {
                corpus_error(line_number, "invalid meta field types");
            }
        }
        corpus.examples.push_back(std::move(example));
    }
    return corpus;
}

void write_corpus_file(const LabeledCorpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCategory::Persist, "cannot open file for writing: " + path);
    }
    out << corpus_to_jsonl(corpus);
    if (!out) {
        throw Error(ErrorCategory::Persist, "failed writing corpus to " + path);
    }
}

LabeledCorpus read_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::Ingest, "cannot open file: " + path);
    }
    return corpus_from_jsonl(in);
}

} // namespace joinguard
