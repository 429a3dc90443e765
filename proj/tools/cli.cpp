#include "cli.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"

#include "eduseg/corpus.hpp"
#include "eduseg/errors.hpp"
#include "eduseg/eval.hpp"
#include "eduseg/model_io.hpp"
#include "eduseg/pipeline.hpp"

namespace eduseg::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

struct TrainFlags {
    std::string framework = "crf";
    bool no_pairing = false;
    bool no_global = false;
    bool no_context = false;
    double l2 = 1.0;
    double C = 1.0;
    int max_iter = 200;
    double tol = 1e-5;
    std::uint64_t seed = 1;
    int workers = 1;
    int min_feature_count = 1;
    bool crossfold_pass1 = false;

    PipelineConfig to_config() const {
        PipelineConfig c;
        c.framework = framework_from_name(framework);
        c.pairing = !no_pairing;
        c.global_pass = !no_global;
        c.contextual = !no_context;
        c.l2 = l2;
        c.C = C;
        c.max_iterations = max_iter;
        c.tolerance = tol;
        c.seed = seed;
        c.workers = workers;
        c.min_feature_count = min_feature_count;
        c.crossfold_pass1 = crossfold_pass1;
        return c;
    }
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--framework", f.framework, "Learning framework")
        ->check(CLI::IsMember({"crf", "lr", "svm"}))
        ->capture_default_str();
    cmd->add_flag("--no-pairing", f.no_pairing, "Describe single tokens instead of token pairs");
    cmd->add_flag("--no-global", f.no_global,
                  "Disable the second pass over segmentation-derived features");
    cmd->add_flag("--no-context", f.no_context, "Disable neighboring-position feature copies");
    cmd->add_option("--l2", f.l2, "L2 penalty strength (crf, lr)")->capture_default_str();
    cmd->add_option("--C", f.C, "Hinge loss multiplier (svm)")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Optimizer iteration cap")->capture_default_str();
    cmd->add_option("--tol", f.tol, "Optimizer convergence tolerance")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed (cross-fold assignment)")
        ->capture_default_str();
    cmd->add_option("--workers", f.workers, "Parallel workers; 0 = all cores")
        ->capture_default_str();
    cmd->add_option("--min-feature-count", f.min_feature_count,
                    "Drop features seen fewer times in training")
        ->capture_default_str();
    cmd->add_flag("--crossfold-pass1", f.crossfold_pass1,
                  "Derive training-time first-pass output by 10-fold jackknifing");
}

/// CLI11 reads a config option only on the root app, so per-subcommand
/// config files are applied by hand: each key fills its option unless the
/// command line already set it. Flags here are all plain booleans, so
/// "key=true"/"key=false" spellings pass straight through.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI{}.from_file(path);
    } catch (const CLI::Error& e) {
        throw ArgumentError("cannot read config file " + path + ": " + e.what());
    }
    for (const CLI::ConfigItem& item : items) {
        if (!item.parents.empty())
            throw ArgumentError("config file " + path + " has an unknown section: " +
                                item.fullname());
        CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
        if (opt == nullptr || !opt->get_configurable())
            throw ArgumentError("config file " + path + " has an unknown key: " + item.name);
        if (!opt->empty()) continue;  // explicit flags win
        try {
            if (opt->get_expected_min() == 0)
                opt->add_result(item.inputs.size() == 1 ? item.inputs.front() : "true");
            else
                opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ArgumentError("config file " + path + ", key " + item.name + ": " + e.what());
        }
    }
}

/// Post-parse requiredness: config files may also satisfy these, so they
/// are not CLI11-required.
void require_value(const std::string& value, const char* flag) {
    if (value.empty()) throw ArgumentError(std::string(flag) + " is required");
}

ordered_json config_json(const PipelineConfig& c) {
    ordered_json j;
    j["framework"] = framework_name(c.framework);
    j["pairing"] = c.pairing;
    j["global_pass"] = c.global_pass;
    j["contextual"] = c.contextual;
    j["l2"] = c.l2;
    j["C"] = c.C;
    j["max_iterations"] = c.max_iterations;
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["min_feature_count"] = c.min_feature_count;
    j["crossfold_pass1"] = c.crossfold_pass1;
    return j;
}

void print_pass_diag(std::ostream& err, const char* name, const PassDiagnostics& d) {
    err << name << ": features=" << d.vocabulary << " iterations=" << d.iterations
        << " objective=" << d.objective << (d.converged ? "" : " (iteration cap reached)")
        << "\n";
    if (d.single_label) err << name << ": warning: training data contains a single label\n";
}

struct OutStream {
    std::ostream* stream;
    std::unique_ptr<std::ofstream> owned;
};

OutStream open_output(const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") return {&out, nullptr};
    auto file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw ArgumentError("cannot open " + path + " for writing");
    std::ostream* raw = file.get();
    return {raw, std::move(file)};
}

/// Per-sentence prediction records; corpus records qualify too.
struct Prediction {
    std::string doc_id;
    int sent_id = 0;
    int n_tokens = 0;
    std::vector<int> boundaries;
};

std::vector<Prediction> read_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path);
    std::vector<Prediction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": invalid JSON: " +
                              e.what());
        }
        if (j.contains("header")) continue;
        try {
            Prediction p;
            p.doc_id = j.at("doc_id").get<std::string>();
            p.sent_id = j.at("sent_id").get<int>();
            if (j.contains("n_tokens"))
                p.n_tokens = j.at("n_tokens").get<int>();
            else
                p.n_tokens = static_cast<int>(j.at("tokens").size());
            p.boundaries = j.at("boundaries").get<std::vector<int>>();
            out.push_back(std::move(p));
        } catch (const std::exception& e) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<LabelSeq> prediction_labels(const Corpus& gold,
                                        const std::vector<Prediction>& preds,
                                        const std::string& path) {
    if (gold.size() != preds.size())
        throw AlignmentError(path + ": " + std::to_string(preds.size()) +
                             " prediction records for " + std::to_string(gold.size()) +
                             " reference sentences");
    std::vector<LabelSeq> out;
    out.reserve(gold.size());
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const Sentence& sent = gold[s].sentence;
        const Prediction& p = preds[s];
        if (p.doc_id != sent.doc_id || p.sent_id != sent.sent_id || p.n_tokens != sent.size())
            throw AlignmentError(path + ": record " + std::to_string(s + 1) +
                                 " does not match sentence " + sent.doc_id + "#" +
                                 std::to_string(sent.sent_id));
        out.push_back(
            spans_to_labels(spans_from_boundaries(p.boundaries, sent.size()), sent.size()));
    }
    return out;
}

/// Per-document B-class F1, documents in order of first appearance.
std::vector<double> per_document_f1(const Corpus& corpus, const std::vector<LabelSeq>& gold,
                                    const std::vector<LabelSeq>& pred) {
    std::vector<std::vector<std::size_t>> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        auto [it, inserted] = index.emplace(corpus[s].sentence.doc_id, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(s);
    }
    std::vector<double> f1s;
    f1s.reserve(groups.size());
    for (const auto& members : groups) {
        std::vector<LabelSeq> dg, dp;
        for (std::size_t s : members) {
            dg.push_back(gold[s]);
            dp.push_back(pred[s]);
        }
        f1s.push_back(evaluate_labels(dg, dp).boundary.f1);
    }
    return f1s;
}

ordered_json metrics_json(const ClassMetrics& m) {
    ordered_json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    if (m.precision_undefined) j["precision_undefined"] = true;
    if (m.recall_undefined) j["recall_undefined"] = true;
    return j;
}

ordered_json report_json(const EvalReport& r) {
    ordered_json j;
    j["B"] = metrics_json(r.boundary);
    j["C"] = metrics_json(r.inside);
    j["macro"] = metrics_json(r.macro);
    j["positions"] = r.positions;
    j["correct"] = r.correct;
    j["counts"] = {{"gold_C", {{"pred_C", r.counts[0][0]}, {"pred_B", r.counts[0][1]}}},
                   {"gold_B", {{"pred_C", r.counts[1][0]}, {"pred_B", r.counts[1][1]}}}};
    return j;
}

void print_report_table(std::ostream& out, const EvalReport& r) {
    out << pad("class", 10) << pad("precision", 11) << pad("recall", 11) << "f1\n";
    const auto row = [&](const char* name, const ClassMetrics& m) {
        out << pad(name, 10) << pad(pct(m.precision), 11) << pad(pct(m.recall), 11)
            << pct(m.f1) << "\n";
    };
    row("B", r.boundary);
    row("C", r.inside);
    row("macro", r.macro);
    out << "positions " << r.positions << "\n";
}

void print_contingency(std::ostream& out, const Contingency& c, const std::string& a,
                       const std::string& b) {
    const auto rows = c.row_totals();
    const auto cols = c.col_totals();
    out << "contingency (rows: " << a << ", columns: " << b << ")\n";
    out << pad("", 12) << pad("correct", 10) << pad("error", 10) << "total\n";
    out << pad("correct", 12) << pad(std::to_string(c.cells[0][0]), 10)
        << pad(std::to_string(c.cells[0][1]), 10) << rows[0] << "\n";
    out << pad("error", 12) << pad(std::to_string(c.cells[1][0]), 10)
        << pad(std::to_string(c.cells[1][1]), 10) << rows[1] << "\n";
    out << pad("total", 12) << pad(std::to_string(cols[0]), 10)
        << pad(std::to_string(cols[1]), 10) << c.total() << "\n";
}

int cmd_train(const TrainFlags& flags, const std::string& train_path,
              const std::string& model_out, std::ostream& err) {
    const PipelineConfig config = flags.to_config();
    err << "config: " << config_json(config).dump() << "\n";
    const Corpus corpus = read_corpus_jsonl_file(train_path);
    err << "training corpus: " << corpus.size() << " sentences\n";
    TrainDiagnostics diag;
    const Segmenter seg = train_segmenter(corpus, config, &diag);
    print_pass_diag(err, "pass1", diag.pass1);
    if (diag.pass2) print_pass_diag(err, "pass2", *diag.pass2);
    save_segmenter(seg, model_out);
    err << "model written to " << model_out << "\n";
    return 0;
}

int cmd_segment(const std::string& model_path, const std::string& input_path,
                const std::string& parses_path, const std::string& output_path, int workers,
                std::istream& in, std::ostream& out, std::ostream& err) {
    const Segmenter seg = load_segmenter(model_path);

    std::vector<Sentence> sentences;
    if (!parses_path.empty()) {
        sentences = read_parse_file_path(parses_path);
    } else if (input_path.empty() || input_path == "-") {
        for (const AnnotatedSentence& as : read_corpus_jsonl(in, "<stdin>"))
            sentences.push_back(as.sentence);
    } else {
        for (const AnnotatedSentence& as : read_corpus_jsonl_file(input_path))
            sentences.push_back(as.sentence);
    }

    OutStream sink = open_output(output_path, out);
    ordered_json header;
    header["header"] = {{"command", "segment"},
                        {"model", model_path},
                        {"config", config_json(seg.config())},
                        {"sentences", sentences.size()}};
    *sink.stream << header.dump() << "\n";

    const std::vector<EduSpans> spans = seg.segment_corpus(sentences, workers);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const Sentence& sent = sentences[s];
        ordered_json j;
        j["doc_id"] = sent.doc_id;
        j["sent_id"] = sent.sent_id;
        j["n_tokens"] = sent.size();
        j["boundaries"] = boundary_token_indices(spans[s]);
        ordered_json arr = ordered_json::array();
        for (const TokenSpan& sp : spans[s]) arr.push_back({sp.first, sp.second});
        j["spans"] = arr;
        j["bracketed"] = bracketed_render(sent, spans[s]);
        *sink.stream << j.dump() << "\n";
    }
    sink.stream->flush();
    err << "segmented " << sentences.size() << " sentences\n";
    return 0;
}

int cmd_evaluate(const std::string& gold_path, const std::string& pred_path,
                 const std::string& compare_path, bool as_json, std::ostream& out) {
    const Corpus gold_corpus = read_corpus_jsonl_file(gold_path);
    std::vector<LabelSeq> gold;
    gold.reserve(gold_corpus.size());
    for (const AnnotatedSentence& as : gold_corpus)
        gold.push_back(spans_to_labels(as.gold, as.sentence.size()));

    const std::vector<LabelSeq> pred =
        prediction_labels(gold_corpus, read_predictions(pred_path), pred_path);
    const EvalReport report = evaluate_labels(gold, pred);

    std::optional<EvalReport> compare_report;
    std::optional<Contingency> contingency;
    std::optional<WilcoxonResult> wilcoxon;
    if (!compare_path.empty()) {
        const std::vector<LabelSeq> other =
            prediction_labels(gold_corpus, read_predictions(compare_path), compare_path);
        compare_report = evaluate_labels(gold, other);
        contingency = error_contingency(gold, pred, other);
        wilcoxon = wilcoxon_signed_rank(per_document_f1(gold_corpus, gold, pred),
                                        per_document_f1(gold_corpus, gold, other));
    }

    if (as_json) {
        ordered_json j;
        j["header"] = {{"command", "evaluate"},
                       {"gold", gold_path},
                       {"pred", pred_path},
                       {"compare", compare_path.empty() ? ordered_json(nullptr)
                                                        : ordered_json(compare_path)}};
        j["report"] = report_json(report);
        if (compare_report) {
            j["compare_report"] = report_json(*compare_report);
            j["contingency"] = {{"pred_correct",
                                 {{"compare_correct", contingency->cells[0][0]},
                                  {"compare_error", contingency->cells[0][1]}}},
                                {"pred_error",
                                 {{"compare_correct", contingency->cells[1][0]},
                                  {"compare_error", contingency->cells[1][1]}}},
                                {"total", contingency->total()}};
            j["wilcoxon"] = {{"n", wilcoxon->n},
                             {"w_plus", wilcoxon->w_plus},
                             {"w_minus", wilcoxon->w_minus},
                             {"p_value", wilcoxon->p_value},
                             {"exact", wilcoxon->exact}};
        }
        out << j.dump(2) << "\n";
        return 0;
    }

    out << "# eduseg evaluate\n# gold: " << gold_path << "\n# pred: " << pred_path << "\n";
    if (!compare_path.empty()) out << "# compare: " << compare_path << "\n";
    print_report_table(out, report);
    if (compare_report) {
        out << "\n# compare set\n";
        print_report_table(out, *compare_report);
        out << "\n";
        print_contingency(out, *contingency, pred_path, compare_path);
        out << "wilcoxon: n=" << wilcoxon->n << " w+=" << wilcoxon->w_plus
            << " w-=" << wilcoxon->w_minus << " p=" << wilcoxon->p_value
            << (wilcoxon->exact ? " (exact)" : " (normal approximation)") << "\n";
    }
    return 0;
}

int cmd_ablate(const TrainFlags& flags, const std::string& train_path,
               const std::string& test_path, bool as_json, std::ostream& out,
               std::ostream& err) {
    const PipelineConfig base = flags.to_config();
    err << "config: " << config_json(base).dump() << "\n";
    const Corpus train = read_corpus_jsonl_file(train_path);
    const Corpus test = read_corpus_jsonl_file(test_path);
    err << "train: " << train.size() << " sentences, test: " << test.size() << " sentences\n";

    const AblationGrid grid = run_ablation_grid(train, test, base);

    if (as_json) {
        ordered_json j;
        j["header"] = {{"command", "ablate"},
                       {"train", train_path},
                       {"test", test_path},
                       {"config", config_json(base)}};
        ordered_json cells = ordered_json::array();
        for (const GridCell& cell : grid.cells) {
            ordered_json c;
            c["framework"] = framework_name(cell.framework);
            c["variant"] = cell.variant;
            c["report"] = report_json(cell.report);
            c["pass1_features"] = cell.diagnostics.pass1.vocabulary;
            if (cell.diagnostics.pass2) c["pass2_features"] = cell.diagnostics.pass2->vocabulary;
            cells.push_back(std::move(c));
        }
        j["cells"] = std::move(cells);
        out << j.dump(2) << "\n";
        return 0;
    }

    out << "# eduseg ablate\n# train: " << train_path << "\n# test: " << test_path << "\n"
        << "# config: " << config_json(base).dump() << "\n";
    out << pad("model", 10) << pad("precision", 11) << pad("recall", 11) << "f1\n";
    std::string last_variant;
    for (const GridCell& cell : grid.cells) {
        if (!last_variant.empty() && cell.variant != last_variant) out << "\n";
        last_variant = cell.variant;
        std::string name = framework_name(cell.framework);
        for (char& ch : name) ch = static_cast<char>(std::toupper(ch));
        if (cell.variant != "full") name += cell.variant;
        out << pad(name, 10) << pad(pct(cell.report.boundary.precision), 11)
            << pad(pct(cell.report.boundary.recall), 11) << pct(cell.report.boundary.f1)
            << "\n";
    }
    return 0;
}

int cmd_stats(const std::string& input_path, bool as_json, std::ostream& out) {
    const Corpus corpus = read_corpus_jsonl_file(input_path);
    const CorpusStats st = corpus_stats(corpus);
    if (as_json) {
        ordered_json j;
        j["header"] = {{"command", "stats"}, {"input", input_path}};
        j["documents"] = st.documents;
        j["sentences"] = st.sentences;
        j["edus"] = st.edus;
        j["boundaries"] = st.boundaries;
        out << j.dump(2) << "\n";
    } else {
        out << "# eduseg stats\n# input: " << input_path << "\n";
        out << "documents  " << st.documents << "\n";
        out << "sentences  " << st.sentences << "\n";
        out << "edus       " << st.edus << "\n";
        out << "boundaries " << st.boundaries << "\n";
    }
    return 0;
}

int cmd_convert(const std::string& parses_path, const std::string& edus_path,
                const std::string& prefix, const std::string& output_path, std::ostream& out,
                std::ostream& err) {
    std::ifstream parses(parses_path, std::ios::binary);
    if (!parses) throw ArgumentError("cannot open parse file: " + parses_path);
    std::ifstream edus(edus_path, std::ios::binary);
    if (!edus) throw ArgumentError("cannot open EDU file: " + edus_path);
    const Corpus corpus = load_parse_edu_pair(parses, edus, prefix);
    OutStream sink = open_output(output_path, out);
    write_corpus_jsonl(*sink.stream, corpus);
    sink.stream->flush();
    const CorpusStats st = corpus_stats(corpus);
    err << "converted " << st.documents << " documents, " << st.sentences << " sentences, "
        << st.edus << " EDUs, " << st.boundaries << " in-sentence boundaries\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Discourse segmenter: splits sentences into elementary discourse units"};
    app.require_subcommand(1);

    TrainFlags train_flags;
    std::string train_corpus, model_out;
    CLI::App* train = app.add_subcommand("train", "Train a segmentation model");
    train->add_option("--train", train_corpus, "Training corpus (JSONL)");
    train->add_option("--model-out", model_out, "Output model path");
    add_train_flags(train, train_flags);

    std::string seg_model, seg_input, seg_parses, seg_output;
    int seg_workers = 1;
    CLI::App* segment = app.add_subcommand("segment", "Segment sentences with a trained model");
    segment->add_option("--model", seg_model, "Model file");
    segment->add_option("--input", seg_input, "Input corpus (JSONL); '-' = stdin");
    segment->add_option("--parses", seg_parses, "Bracketed-tree input, one tree per line");
    segment->add_option("--output", seg_output, "Output path; default stdout");
    segment->add_option("--workers", seg_workers, "Parallel workers; 0 = all cores")
        ->capture_default_str();

    std::string eval_gold, eval_pred, eval_compare;
    bool eval_json = false;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold EDUs");
    evaluate->add_option("--gold", eval_gold, "Gold corpus (JSONL)");
    evaluate->add_option("--pred", eval_pred, "Predictions (segment output)");
    evaluate->add_option("--compare", eval_compare,
                         "Second prediction set: adds error contingency and signed-rank test");
    evaluate->add_flag("--json", eval_json, "Machine-readable output");

    TrainFlags ablate_flags;
    std::string ablate_train, ablate_test;
    bool ablate_json = false;
    CLI::App* ablate =
        app.add_subcommand("ablate", "Train and score all frameworks under all feature regimes");
    ablate->add_option("--train", ablate_train, "Training corpus (JSONL)");
    ablate->add_option("--test", ablate_test, "Test corpus (JSONL)");
    ablate->add_flag("--json", ablate_json, "Machine-readable output");
    add_train_flags(ablate, ablate_flags);

    std::string stats_input;
    bool stats_json = false;
    CLI::App* stats = app.add_subcommand("stats", "Corpus bookkeeping counts");
    stats->add_option("--input", stats_input, "Corpus (JSONL)");
    stats->add_flag("--json", stats_json, "Machine-readable output");

    std::string conv_parses, conv_edus, conv_prefix = "doc", conv_output;
    CLI::App* convert =
        app.add_subcommand("convert", "Build a JSONL corpus from parse and EDU files");
    convert->add_option("--parses", conv_parses, "Bracketed trees, one per line");
    convert->add_option("--edus", conv_edus,
                        "EDU texts, one per line, blank lines between documents");
    convert->add_option("--doc-prefix", conv_prefix, "Document id prefix")
        ->capture_default_str();
    convert->add_option("--output", conv_output, "Output path; default stdout");

    std::string config_path;
    for (CLI::App* sub : {train, segment, evaluate, ablate, stats, convert})
        sub->add_option("--config", config_path,
                        "Read flag defaults from a config file (flags win)")
            ->configurable(false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::stringstream out_buf, err_buf;
        const int code = app.exit(e, out_buf, err_buf);
        out << out_buf.str();
        err << err_buf.str();
        return code;
    }

    try {
        if (!config_path.empty())
            for (CLI::App* sub : {train, segment, evaluate, ablate, stats, convert})
                if (sub->parsed()) apply_config_file(sub, config_path);

        if (train->parsed()) {
            require_value(train_corpus, "--train");
            require_value(model_out, "--model-out");
            return cmd_train(train_flags, train_corpus, model_out, err);
        }
        if (segment->parsed()) {
            require_value(seg_model, "--model");
            if (!seg_input.empty() && !seg_parses.empty())
                throw ArgumentError("--input and --parses are mutually exclusive");
            return cmd_segment(seg_model, seg_input, seg_parses, seg_output, seg_workers, in,
                               out, err);
        }
        if (evaluate->parsed()) {
            require_value(eval_gold, "--gold");
            require_value(eval_pred, "--pred");
            return cmd_evaluate(eval_gold, eval_pred, eval_compare, eval_json, out);
        }
        if (ablate->parsed()) {
            require_value(ablate_train, "--train");
            require_value(ablate_test, "--test");
            return cmd_ablate(ablate_flags, ablate_train, ablate_test, ablate_json, out, err);
        }
        if (stats->parsed()) {
            require_value(stats_input, "--input");
            return cmd_stats(stats_input, stats_json, out);
        }
        if (convert->parsed()) {
            require_value(conv_parses, "--parses");
            require_value(conv_edus, "--edus");
            return cmd_convert(conv_parses, conv_edus, conv_prefix, conv_output, out, err);
        }
        err << "no command given\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace eduseg::cli
