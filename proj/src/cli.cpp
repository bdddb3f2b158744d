#include "joinguard/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "joinguard/assess.hpp"
#include "joinguard/csv.hpp"
#include "joinguard/eval.hpp"
#include "joinguard/gbdt.hpp"
#include "joinguard/json_io.hpp"
#include "joinguard/synth.hpp"

namespace joinguard::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

constexpr const char* kMaxRowsEnv = "JOINGUARD_MAX_ROWS";

std::size_t env_max_rows_or(std::size_t fallback) {
    const char* raw = std::getenv(kMaxRowsEnv);
    if (raw == nullptr || *raw == '\0') return fallback;
    std::size_t value = 0;
    const std::string text(raw);
    try {
        std::size_t consumed = 0;
        value = std::stoull(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw Error(ErrorCategory::Argument,
                    std::string(kMaxRowsEnv) + " must be a positive integer, got: " + text);
    }
    if (value < 1) {
        throw Error(ErrorCategory::Argument,
                    std::string(kMaxRowsEnv) + " must be a positive integer, got: " + text);
    }
    return value;
}

char parse_delimiter(const std::string& text) {
    if (text.size() != 1) {
        throw Error(ErrorCategory::Argument, "delimiter must be a single character");
    }
    return text[0];
}

std::vector<std::pair<std::string, std::string>> parse_key_pairs(
    const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, std::string>> keys;
    keys.reserve(raw.size());
    for (const std::string& item : raw) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size() ||
            item.find('=', eq + 1) != std::string::npos) {
            throw Error(ErrorCategory::Argument,
                        "invalid key pair (expected left=right): " + item);
        }
        keys.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return keys;
}

std::string read_text_file(const std::string& path, ErrorCategory category) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(category, "cannot open file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCategory::Persist, "cannot open file for writing: " + out_path);
    }
    out << text;
    if (!out) {
        throw Error(ErrorCategory::Persist, "failed writing to " + out_path);
    }
}

std::string csv_quote(const std::string& token) {
    bool needs = false;
    for (char c : token) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs = true;
            break;
        }
    }
    if (!needs) return token;
    std::string quoted = "\"";
    for (char c : token) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) row += ',';
        row += csv_quote(cells[i]);
    }
    row += '\n';
    return row;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string joined;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) joined += ';';
        joined += names[i];
    }
    return joined;
}

std::string csv_of_uniqueness(const UniquenessReport& report) {
    std::vector<std::string> header = {"attrs",          "n_rows",
                                       "distinct_count", "singleton_count",
                                       "distinct_ratio", "singleton_ratio",
                                       "min_group_size"};
    std::vector<std::string> row = {join_names(report.attrs),
                                    std::to_string(report.n_rows),
                                    std::to_string(report.distinct_count),
                                    std::to_string(report.singleton_count),
                                    number_token(report.distinct_ratio),
                                    number_token(report.singleton_ratio),
                                    std::to_string(report.min_group_size)};
    for (const auto& [k, fraction] : report.small_group_fractions) {
        header.push_back("small_group_fraction_" + std::to_string(k));
        row.push_back(number_token(fraction));
    }
    return csv_row(header) + csv_row(row);
}

std::string csv_of_assessment(const LeakageAssessment& assessment) {
    const std::vector<std::string> header = {
        "u_a",       "u_b",         "u_ab",        "baseline",  "signal",
        "overall_direction", "direction_a", "direction_b", "n_rows_a", "n_rows_b",
        "n_rows_ab", "epsilon"};
    const std::vector<std::string> row = {
        number_token(assessment.report_a.distinct_ratio),
        number_token(assessment.report_b.distinct_ratio),
        number_token(assessment.report_ab.distinct_ratio),
        number_token(assessment.baseline),
        number_token(assessment.signal),
        to_string(assessment.overall_direction),
        to_string(assessment.direction_a),
        to_string(assessment.direction_b),
        std::to_string(assessment.report_a.n_rows),
        std::to_string(assessment.report_b.n_rows),
        std::to_string(assessment.report_ab.n_rows),
        number_token(assessment.epsilon)};
    return csv_row(header) + csv_row(row);
}

std::string csv_of_prediction(double u_a, double u_b, double signal, Direction dir,
                              double epsilon) {
    const std::vector<std::string> header = {"u_a", "u_b", "predicted_signal", "direction",
                                             "epsilon"};
    const std::vector<std::string> row = {number_token(u_a), number_token(u_b),
                                          number_token(signal), to_string(dir),
                                          number_token(epsilon)};
    return csv_row(header) + csv_row(row);
}

std::string csv_of_eval(const EvalReport& report) {
    const std::vector<std::string> header = {
        "n",   "direction_accuracy", "baseline_direction_accuracy",
        "mae", "rmse",               "spearman_u_vs_signal",
        "epsilon"};
    const std::vector<std::string> row = {std::to_string(report.n),
                                          number_token(report.direction_accuracy),
                                          number_token(report.baseline_direction_accuracy),
                                          number_token(report.mae),
                                          number_token(report.rmse),
                                          number_token(report.spearman_u_vs_signal),
                                          number_token(report.epsilon)};
    return csv_row(header) + csv_row(row);
}

std::string render_json(const nlohmann::ordered_json& doc) {
    return doc.dump(2) + "\n";
}

struct UniquenessArgs {
    std::string input;
    std::vector<std::string> attrs;
    std::vector<std::string> drop;
    std::string delimiter = ",";
    bool no_header = false;
    std::vector<std::size_t> small_ks = {2, 5};
    std::string format = "json";
    std::string out_path;
};

struct AssessArgs {
    std::string left;
    std::string right;
    std::vector<std::string> keys;
    std::string kind = "inner";
    std::string baseline = "max";
    std::vector<std::string> attrs_a;
    std::vector<std::string> attrs_b;
    std::size_t max_rows = 0;
    bool max_rows_given = false;
    double epsilon = kDirectionEpsilon;
    std::string delimiter = ",";
    bool no_header = false;
    std::string format = "json";
    std::string out_path;
};

struct GenerateArgs {
    std::size_t pairs = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::size_t rows_min = 100;
    std::size_t rows_max = 2000;
    int age_min = 18;
    int age_max = 90;
    std::size_t genders = 2;
    std::size_t extra_cols_min = 1;
    std::size_t extra_cols_max = 6;
    std::size_t cardinality_min = 2;
    std::size_t cardinality_max = 50;
    double dup_min = 0.0;
    double dup_max = 0.6;
    double id_prob = 0.3;
};

struct TrainArgs {
    std::string corpus;
    std::string out_path;
    std::size_t trees = 100;
    std::size_t depth = 3;
    double lr = 0.1;
    std::size_t min_leaf = 2;
    std::uint64_t seed = 0;
};

struct PredictArgs {
    std::string model;
    double u_a = 0.0;
    double u_b = 0.0;
    double epsilon = kDirectionEpsilon;
    std::string format = "json";
    std::string out_path;
};

struct EvaluateArgs {
    std::string model;
    std::string corpus;
    std::optional<double> min_accuracy;
    double epsilon = kDirectionEpsilon;
    std::string format = "json";
    std::string out_path;
};

IngestOptions ingest_options(const std::string& delimiter, bool no_header,
                             const std::vector<std::string>& drop = {}) {
    IngestOptions options;
    options.delimiter = parse_delimiter(delimiter);
    options.has_header = !no_header;
    options.drop_columns = drop;
    return options;
}

int run_uniqueness(const UniquenessArgs& args, std::ostream& out) {
    const Table table = load_table_file(args.input, ingest_options(args.delimiter,
                                                                   args.no_header, args.drop));
    std::vector<std::string> attrs = args.attrs;
    if (attrs.empty()) {
        for (const auto& column : table.columns()) attrs.push_back(column.name);
    }
    const UniquenessReport report = uniqueness_report(table, attrs, args.small_ks);
    emit(args.format == "csv" ? csv_of_uniqueness(report) : render_json(to_json(report)),
         args.out_path, out);
    return kExitOk;
}

int run_assess(const AssessArgs& args, std::ostream& out) {
    const IngestOptions options = ingest_options(args.delimiter, args.no_header);
    const Table a = load_table_file(args.left, options);
    const Table b = load_table_file(args.right, options);
    JoinSpec spec;
    spec.keys = parse_key_pairs(args.keys);
    spec.kind = parse_join_kind(args.kind);
    spec.max_output_rows =
        args.max_rows_given ? args.max_rows : env_max_rows_or(spec.max_output_rows);
    AssessOptions assess_options;
    assess_options.attrs_a = args.attrs_a;
    assess_options.attrs_b = args.attrs_b;
    assess_options.baseline_mode = parse_baseline_mode(args.baseline);
    assess_options.epsilon = args.epsilon;
    const LeakageAssessment assessment = assess_pair(a, b, spec, assess_options);
    emit(args.format == "csv" ? csv_of_assessment(assessment)
                              : render_json(to_json(assessment)),
         args.out_path, out);
    return kExitOk;
}

int run_generate(const GenerateArgs& args, std::ostream& err) {
    GeneratorParams params;
    params.rows_a = {args.rows_min, args.rows_max};
    params.rows_b = {args.rows_min, args.rows_max};
    params.age_lo = args.age_min;
    params.age_hi = args.age_max;
    params.gender_values = args.genders;
    params.extra_cols_a = {args.extra_cols_min, args.extra_cols_max};
    params.extra_cols_b = {args.extra_cols_min, args.extra_cols_max};
    params.extra_cardinality = {args.cardinality_min, args.cardinality_max};
    params.duplicate_rate_lo = args.dup_min;
    params.duplicate_rate_hi = args.dup_max;
    params.id_column_prob = args.id_prob;
    params.max_join_rows = env_max_rows_or(params.max_join_rows);
    const LabeledCorpus corpus = generate_corpus(params, args.pairs, args.seed);
    write_corpus_file(corpus, args.out_path);
    err << "generated " << corpus.examples.size() << " examples (skipped " << corpus.skipped
        << ") -> " << args.out_path << "\n";
    return kExitOk;
}

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    const LabeledCorpus corpus = read_corpus_file(args.corpus);
    Hyperparams hp;
    hp.n_trees = args.trees;
    hp.max_depth = args.depth;
    hp.learning_rate = args.lr;
    hp.min_samples_leaf = args.min_leaf;
    hp.seed = args.seed;
    TrainTrace trace;
    const GbdtModel model = train(corpus, hp, &trace);
    emit(save_model(model), args.out_path, out);
    err << "trained " << model.trees.size() << " trees on " << corpus.examples.size()
        << " examples (mse " << number_token(trace.stage_mse.front()) << " -> "
        << number_token(trace.stage_mse.back()) << ") -> " << args.out_path << "\n";
    return kExitOk;
}

int run_predict(const PredictArgs& args, std::ostream& out) {
    const GbdtModel model = load_model(read_text_file(args.model, ErrorCategory::Persist));
    auto check_ratio = [](double value, const char* name) {
        if (!(value > 0.0) || value > 1.0) {
            throw Error(ErrorCategory::Argument,
                        std::string(name) + " must lie in (0, 1]");
        }
    };
    check_ratio(args.u_a, "--ua");
    check_ratio(args.u_b, "--ub");
    const double predicted = predict(model, {args.u_a, args.u_b});
    const Direction dir = direction(predicted, args.epsilon);
    if (args.format == "csv") {
        emit(csv_of_prediction(args.u_a, args.u_b, predicted, dir, args.epsilon),
             args.out_path, out);
    } else {
        nlohmann::ordered_json doc;
        doc["u_a"] = args.u_a;
        doc["u_b"] = args.u_b;
        doc["predicted_signal"] = predicted;
        doc["direction"] = to_string(dir);
        doc["epsilon"] = args.epsilon;
        emit(render_json(doc), args.out_path, out);
    }
    return kExitOk;
}

int run_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    const GbdtModel model = load_model(read_text_file(args.model, ErrorCategory::Persist));
    const LabeledCorpus corpus = read_corpus_file(args.corpus);
    const GbdtModel baseline = baseline_constant(corpus);
    const EvalReport report = evaluate_model(model, baseline, corpus, args.epsilon);
    emit(args.format == "csv" ? csv_of_eval(report) : render_json(to_json(report)),
         args.out_path, out);
    if (args.min_accuracy.has_value() && report.direction_accuracy < *args.min_accuracy) {
        err << "error: gate: direction_accuracy " << number_token(report.direction_accuracy)
            << " below required " << number_token(*args.min_accuracy) << "\n";
        return kExitGate;
    }
    return kExitOk;
}

void add_format_flags(CLI::App* cmd, std::string& format, std::string& out_path) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "Write the report to a file instead of stdout");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantifies re-identification risk of tabular data before and after "
                 "quasi-identifier joins, and trains a predictor for the post-join "
                 "leakage signal."};
    app.name("joinguard");
    app.require_subcommand(1);

    UniquenessArgs uniqueness_args;
    auto* uniqueness_cmd =
        app.add_subcommand("uniqueness", "Measure identifiability of one table");
    uniqueness_cmd->add_option("--input", uniqueness_args.input, "CSV file to measure")
        ->required();
    uniqueness_cmd->add_option("--attrs", uniqueness_args.attrs,
                               "Columns to group by (default: all)")
        ->delimiter(',');
    uniqueness_cmd->add_option("--drop", uniqueness_args.drop, "Columns to remove on load")
        ->delimiter(',');
    uniqueness_cmd->add_option("--delimiter", uniqueness_args.delimiter, "Field delimiter");
    uniqueness_cmd->add_flag("--no-header", uniqueness_args.no_header,
                             "Input has no header row");
    uniqueness_cmd
        ->add_option("--small-ks", uniqueness_args.small_ks,
                     "Group-size thresholds for small-group fractions")
        ->delimiter(',');
    add_format_flags(uniqueness_cmd, uniqueness_args.format, uniqueness_args.out_path);

    AssessArgs assess_args;
    auto* assess_cmd =
        app.add_subcommand("assess", "Measure leakage across a join of two tables");
    assess_cmd->add_option("--left", assess_args.left, "Left CSV file")->required();
    assess_cmd->add_option("--right", assess_args.right, "Right CSV file")->required();
    assess_cmd
        ->add_option("--keys", assess_args.keys,
                     "Join keys as left=right pairs, comma separated")
        ->required()
        ->delimiter(',');
    assess_cmd->add_option("--kind", assess_args.kind, "Join kind")
        ->check(CLI::IsMember({"inner", "left", "right"}));
    assess_cmd->add_option("--baseline", assess_args.baseline, "Baseline mode")
        ->check(CLI::IsMember({"max", "one"}));
    assess_cmd->add_option("--attrs-a", assess_args.attrs_a,
                           "Left attribute set (default: all columns)")
        ->delimiter(',');
    assess_cmd->add_option("--attrs-b", assess_args.attrs_b,
                           "Right attribute set (default: all columns)")
        ->delimiter(',');
    auto* max_rows_opt = assess_cmd->add_option(
        "--max-rows", assess_args.max_rows,
        "Join output row cap (overrides JOINGUARD_MAX_ROWS)");
    assess_cmd->add_option("--epsilon", assess_args.epsilon, "NoChange tolerance");
    assess_cmd->add_option("--delimiter", assess_args.delimiter, "Field delimiter");
    assess_cmd->add_flag("--no-header", assess_args.no_header, "Inputs have no header row");
    add_format_flags(assess_cmd, assess_args.format, assess_args.out_path);

    GenerateArgs generate_args;
    auto* generate_cmd =
        app.add_subcommand("generate", "Generate a labeled synthetic corpus");
    generate_cmd->add_option("--pairs", generate_args.pairs, "Number of dataset pairs")
        ->required();
    generate_cmd->add_option("--seed", generate_args.seed, "Master seed")->required();
    generate_cmd->add_option("--out", generate_args.out_path, "Corpus output path (JSONL)")
        ->required();
    generate_cmd->add_option("--rows-min", generate_args.rows_min, "Minimum rows per table");
    generate_cmd->add_option("--rows-max", generate_args.rows_max, "Maximum rows per table");
    generate_cmd->add_option("--age-min", generate_args.age_min, "Lowest age value");
    generate_cmd->add_option("--age-max", generate_args.age_max, "Highest age value");
    generate_cmd->add_option("--genders", generate_args.genders, "Gender category count");
    generate_cmd->add_option("--extra-cols-min", generate_args.extra_cols_min,
                             "Minimum extra columns");
    generate_cmd->add_option("--extra-cols-max", generate_args.extra_cols_max,
                             "Maximum extra columns");
    generate_cmd->add_option("--cardinality-min", generate_args.cardinality_min,
                             "Minimum extra-column cardinality");
    generate_cmd->add_option("--cardinality-max", generate_args.cardinality_max,
                             "Maximum extra-column cardinality");
    generate_cmd->add_option("--dup-min", generate_args.dup_min, "Minimum duplication rate");
    generate_cmd->add_option("--dup-max", generate_args.dup_max, "Maximum duplication rate");
    generate_cmd->add_option("--id-prob", generate_args.id_prob,
                             "Probability of a unique row-id column");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train the leakage predictor");
    train_cmd->add_option("--corpus", train_args.corpus, "Corpus JSONL path")->required();
    train_cmd->add_option("--out", train_args.out_path, "Model output path")->required();
    train_cmd->add_option("--trees", train_args.trees, "Number of boosting stages");
    train_cmd->add_option("--depth", train_args.depth, "Maximum tree depth");
    train_cmd->add_option("--lr", train_args.lr, "Learning rate");
    train_cmd->add_option("--min-leaf", train_args.min_leaf, "Minimum samples per leaf");
    train_cmd->add_option("--seed", train_args.seed, "Training seed");

    PredictArgs predict_args;
    auto* predict_cmd =
        app.add_subcommand("predict", "Predict the leakage signal from two ratios");
    predict_cmd->add_option("--model", predict_args.model, "Model JSON path")->required();
    predict_cmd->add_option("--ua", predict_args.u_a, "Pre-join uniqueness of table A")
        ->required();
    predict_cmd->add_option("--ub", predict_args.u_b, "Pre-join uniqueness of table B")
        ->required();
    predict_cmd->add_option("--epsilon", predict_args.epsilon, "NoChange tolerance");
    add_format_flags(predict_cmd, predict_args.format, predict_args.out_path);

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "Score a model against a labeled corpus");
    evaluate_cmd->add_option("--model", evaluate_args.model, "Model JSON path")->required();
    evaluate_cmd->add_option("--corpus", evaluate_args.corpus, "Corpus JSONL path")
        ->required();
    auto* gate_opt = evaluate_cmd->add_option("--min-accuracy",
                                              "Exit 3 when direction accuracy falls below this");
    evaluate_cmd->add_option("--epsilon", evaluate_args.epsilon, "NoChange tolerance");
    add_format_flags(evaluate_cmd, evaluate_args.format, evaluate_args.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    assess_args.max_rows_given = max_rows_opt->count() > 0;
    if (gate_opt->count() > 0) {
        evaluate_args.min_accuracy = gate_opt->as<double>();
    }

    try {
        if (app.got_subcommand(uniqueness_cmd)) return run_uniqueness(uniqueness_args, out);
        if (app.got_subcommand(assess_cmd)) return run_assess(assess_args, out);
        if (app.got_subcommand(generate_cmd)) return run_generate(generate_args, err);
        if (app.got_subcommand(train_cmd)) return run_train(train_args, out, err);
        if (app.got_subcommand(predict_cmd)) return run_predict(predict_args, out);
        if (app.got_subcommand(evaluate_cmd)) return run_evaluate(evaluate_args, out, err);
        err << "error: usage: no subcommand selected\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.category_name() << ": " << e.what() << "\n";
        return e.category() == ErrorCategory::Argument ? kExitUsage : kExitPipeline;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return kExitPipeline;
    }
}

} // namespace joinguard::cli
