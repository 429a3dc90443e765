#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cli.hpp"
#include "eduseg/corpus.hpp"
#include "eduseg/eval.hpp"
#include "eduseg/model_io.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace eduseg;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    CliResult r;
    r.code = cli::run(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "eduseg_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_in(const std::string& name) { return (work_dir() / name).string(); }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string corpus_file(const std::string& name, const Corpus& corpus) {
    const std::string path = path_in(name);
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    write_corpus_jsonl(out, corpus);
    return path;
}

/// Prediction records echoing the gold boundaries, with an optional
/// per-sentence override.
std::string predictions_file(const std::string& name, const Corpus& corpus,
                             int override_sentence = -1,
                             const std::vector<int>& override_boundaries = {}) {
    std::ostringstream buf;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        const Sentence& sent = corpus[s].sentence;
        ordered_json j;
        j["doc_id"] = sent.doc_id;
        j["sent_id"] = sent.sent_id;
        j["n_tokens"] = sent.size();
        j["boundaries"] = static_cast<int>(s) == override_sentence
                              ? override_boundaries
                              : boundary_token_indices(corpus[s].gold);
        buf << j.dump() << "\n";
    }
    const std::string path = path_in(name);
    write_file(path, buf.str());
    return path;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

/// Shared tiny corpus and a model trained on it, built once.
const Corpus& small_corpus() {
    static const Corpus corpus = test::separable_corpus(2, 8, 5, "trn");
    return corpus;
}

const std::string& small_corpus_path() {
    static const std::string path = corpus_file("train.jsonl", small_corpus());
    return path;
}

const std::string& trained_model_path() {
    static const std::string path = [] {
        const std::string model = path_in("model.json");
        const CliResult r = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                     model, "--framework", "lr", "--l2", "0.01", "--C", "10",
                                     "--max-iter", "300"});
        REQUIRE(r.code == 0);
        return model;
    }();
    return path;
}

const char* kParseLines =
    "(S (NP (DT The) (NN dog)) (VP (VBD barked)))\n"
    "(S (NP (PRP It)) (VP (VBD ran) (ADVP (RB away))))\n"
    "(S (NP (DT A) (NN cat)) (VP (VBD slept)))\n";

const char* kEduLines =
    "The dog barked\n"
    "It ran\n"
    "away\n"
    "\n"
    "A cat slept\n";

}  // namespace

TEST_CASE("train writes a loadable model and reruns byte-identically") {
    const CliResult first = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                     path_in("m1.json"), "--framework", "lr", "--l2", "0.01",
                                     "--C", "10", "--max-iter", "300"});
    REQUIRE(first.code == 0);
    CHECK(first.err.find("config:") != std::string::npos);
    CHECK(first.err.find("\"seed\":1") != std::string::npos);
    CHECK(first.err.find("model written to") != std::string::npos);
    CHECK(first.err.find("pass1:") != std::string::npos);
    CHECK(first.err.find("pass2:") != std::string::npos);
    CHECK(first.out.empty());  // diagnostics stay on the error stream

    const Segmenter seg = load_segmenter(path_in("m1.json"));
    CHECK(seg.config().framework == Framework::LogisticRegression);
    CHECK(seg.has_second_pass());

    const CliResult second = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                      path_in("m2.json"), "--framework", "lr", "--l2", "0.01",
                                      "--C", "10", "--max-iter", "300"});
    REQUIRE(second.code == 0);
    CHECK(read_file(path_in("m1.json")) == read_file(path_in("m2.json")));
}

TEST_CASE("training flags map onto the stored configuration") {
    const CliResult one_pass = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                        path_in("onepass.json"), "--framework", "crf",
                                        "--no-global", "--max-iter", "80"});
    REQUIRE(one_pass.code == 0);
    CHECK(read_file(path_in("onepass.json")).find("\"pass2\":null") != std::string::npos);
    const Segmenter seg = load_segmenter(path_in("onepass.json"));
    CHECK_FALSE(seg.has_second_pass());
    CHECK(seg.config().framework == Framework::Crf);
    CHECK_FALSE(seg.config().global_pass);

    const CliResult svm = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                   path_in("svm.json"), "--framework", "svm", "--C", "10",
                                   "--no-pairing", "--seed", "9", "--max-iter", "150"});
    REQUIRE(svm.code == 0);
    const Segmenter sm = load_segmenter(path_in("svm.json"));
    CHECK(sm.config().framework == Framework::Svm);
    CHECK_FALSE(sm.config().pairing);
    CHECK(sm.config().seed == 9);
    CHECK(sm.has_second_pass());
}

TEST_CASE("config files supply defaults and explicit flags win") {
    write_file(path_in("train.ini"), "framework=svm\nl2=0.5\nmax-iter=120\n");

    const CliResult from_file = run_cli({"train", "--train", small_corpus_path(), "--model-out",
                                         path_in("cfg1.json"), "--config", path_in("train.ini")});
    REQUIRE(from_file.code == 0);
    const Segmenter a = load_segmenter(path_in("cfg1.json"));
    CHECK(a.config().framework == Framework::Svm);
    CHECK(a.config().l2 == 0.5);
    CHECK(a.config().max_iterations == 120);

    const CliResult overridden =
        run_cli({"train", "--train", small_corpus_path(), "--model-out", path_in("cfg2.json"),
                 "--config", path_in("train.ini"), "--framework", "lr"});
    REQUIRE(overridden.code == 0);
    const Segmenter b = load_segmenter(path_in("cfg2.json"));
    CHECK(b.config().framework == Framework::LogisticRegression);
    CHECK(b.config().l2 == 0.5);  // non-conflicting file values still apply
}

TEST_CASE("segment emits a config header and faithful records") {
    const CliResult r = run_cli({"segment", "--model", trained_model_path(), "--input",
                                 small_corpus_path(), "--workers", "2"});
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == small_corpus().size() + 1);

    const ordered_json header = ordered_json::parse(lines[0]);
    REQUIRE(header.contains("header"));
    CHECK(header["header"]["command"] == "segment");
    CHECK(header["header"]["config"]["framework"] == "lr");
    CHECK(header["header"]["sentences"] == small_corpus().size());

    for (std::size_t s = 0; s < small_corpus().size(); ++s) {
        const Sentence& sent = small_corpus()[s].sentence;
        const ordered_json j = ordered_json::parse(lines[s + 1]);
        CHECK(j.at("doc_id").get<std::string>() == sent.doc_id);
        CHECK(j.at("sent_id").get<int>() == sent.sent_id);
        CHECK(j.at("n_tokens").get<int>() == sent.size());

        EduSpans spans;
        for (const auto& sp : j.at("spans")) spans.emplace_back(sp[0].get<int>(), sp[1].get<int>());
        CHECK_NOTHROW(validate_spans(spans, sent.size()));
        CHECK(boundary_token_indices(spans) == j.at("boundaries").get<std::vector<int>>());
        CHECK(spans == spans_from_boundaries(j.at("boundaries").get<std::vector<int>>(),
                                             sent.size()));
        CHECK(j.at("bracketed").get<std::string>() == bracketed_render(sent, spans));
    }
}

TEST_CASE("segment reads the input stream and tolerates emptiness") {
    const CliResult empty = run_cli({"segment", "--model", trained_model_path()}, "");
    REQUIRE(empty.code == 0);
    const std::vector<std::string> none = lines_of(empty.out);
    REQUIRE(none.size() == 1);  // header only
    CHECK(none[0].find("\"header\"") != std::string::npos);

    std::ostringstream corpus_text;
    write_corpus_jsonl(corpus_text, small_corpus());
    const CliResult piped = run_cli({"segment", "--model", trained_model_path()},
                                    corpus_text.str());
    REQUIRE(piped.code == 0);
    CHECK(lines_of(piped.out).size() == small_corpus().size() + 1);
}

TEST_CASE("segment accepts bracketed-tree input") {
    write_file(path_in("trees.txt"), kParseLines);
    const CliResult r = run_cli({"segment", "--model", trained_model_path(), "--parses",
                                 path_in("trees.txt"), "--output", path_in("seg_out.jsonl")});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());  // routed to the file
    const std::vector<std::string> lines = lines_of(read_file(path_in("seg_out.jsonl")));
    REQUIRE(lines.size() == 4);
    for (int s = 1; s <= 3; ++s) {
        const ordered_json j = ordered_json::parse(lines[static_cast<std::size_t>(s)]);
        CHECK(j.at("sent_id").get<int>() == s);
    }
    CHECK(ordered_json::parse(lines[1]).at("n_tokens").get<int>() == 3);

    const CliResult both = run_cli({"segment", "--model", trained_model_path(), "--input",
                                    small_corpus_path(), "--parses", path_in("trees.txt")});
    CHECK(both.code != 0);
    CHECK(both.err.find("mutually exclusive") != std::string::npos);

    const CliResult missing = run_cli({"segment", "--model", path_in("no_model.json")});
    CHECK(missing.code != 0);
    CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("evaluate reports perfect agreement for echoed gold") {
    const std::string gold = small_corpus_path();
    const std::string pred = predictions_file("echo.jsonl", small_corpus());

    const CliResult as_json =
        run_cli({"evaluate", "--gold", gold, "--pred", pred, "--json"});
    REQUIRE(as_json.code == 0);
    const ordered_json j = ordered_json::parse(as_json.out);
    CHECK(j["report"]["B"]["f1"] == 100.0);
    CHECK(j["report"]["C"]["f1"] == 100.0);
    CHECK(j["report"]["macro"]["f1"] == 100.0);
    std::size_t positions = 0;
    for (const AnnotatedSentence& as : small_corpus())
        positions += static_cast<std::size_t>(as.sentence.size()) - 1;
    CHECK(j["report"]["positions"] == positions);

    const CliResult as_text = run_cli({"evaluate", "--gold", gold, "--pred", pred});
    REQUIRE(as_text.code == 0);
    CHECK(as_text.out.find("# eduseg evaluate") != std::string::npos);
    CHECK(as_text.out.find("macro") != std::string::npos);
    CHECK(as_text.out.find("100.0") != std::string::npos);
}

TEST_CASE("evaluate --compare adds contingency and signed-rank output") {
    const std::string gold = small_corpus_path();
    const std::string pred = predictions_file("cmp_base.jsonl", small_corpus());

    const CliResult same = run_cli({"evaluate", "--gold", gold, "--pred", pred, "--compare",
                                    pred, "--json"});
    REQUIRE(same.code == 0);
    const ordered_json js = ordered_json::parse(same.out);
    CHECK(js["contingency"]["pred_correct"]["compare_error"] == 0);
    CHECK(js["contingency"]["pred_error"]["compare_correct"] == 0);
    CHECK(js["wilcoxon"]["n"] == 0);
    CHECK(js["wilcoxon"]["p_value"] == 1.0);

    // A compare set that errs on one sentence: predictions stay gold-equal,
    // so every disagreement lands in (pred correct, compare wrong).
    const int n0 = small_corpus()[0].sentence.size();
    std::vector<int> wrong = boundary_token_indices(small_corpus()[0].gold);
    if (!wrong.empty())
        wrong.pop_back();
    else
        wrong.push_back(n0);
    const std::string other = predictions_file("cmp_other.jsonl", small_corpus(), 0, wrong);
    const CliResult diff = run_cli({"evaluate", "--gold", gold, "--pred", pred, "--compare",
                                    other, "--json"});
    REQUIRE(diff.code == 0);
    const ordered_json jd = ordered_json::parse(diff.out);
    CHECK(jd["contingency"]["pred_correct"]["compare_error"] == 1);
    CHECK(jd["contingency"]["pred_error"]["compare_correct"] == 0);
    CHECK(jd["contingency"]["pred_error"]["compare_error"] == 0);

    const CliResult text = run_cli({"evaluate", "--gold", gold, "--pred", pred, "--compare",
                                    other});
    REQUIRE(text.code == 0);
    CHECK(text.out.find("contingency") != std::string::npos);
    CHECK(text.out.find("wilcoxon:") != std::string::npos);
}

TEST_CASE("evaluate misalignment exits nonzero naming the sentence") {
    const std::string gold = small_corpus_path();

    // Wrong sentence identity in record 1.
    std::ostringstream buf;
    for (std::size_t s = 0; s < small_corpus().size(); ++s) {
        const Sentence& sent = small_corpus()[s].sentence;
        ordered_json j;
        j["doc_id"] = sent.doc_id;
        j["sent_id"] = s == 0 ? 999 : sent.sent_id;
        j["n_tokens"] = sent.size();
        j["boundaries"] = boundary_token_indices(small_corpus()[s].gold);
        buf << j.dump() << "\n";
    }
    write_file(path_in("misaligned.jsonl"), buf.str());
    const CliResult wrong = run_cli({"evaluate", "--gold", gold, "--pred",
                                     path_in("misaligned.jsonl")});
    CHECK(wrong.code == 1);
    CHECK(wrong.err.find("does not match sentence") != std::string::npos);
    CHECK(wrong.err.find("trn0001") != std::string::npos);

    // Too few records.
    const std::vector<std::string> all = lines_of(buf.str());
    std::ostringstream shorter;
    for (std::size_t s = 1; s < all.size(); ++s) shorter << all[s] << "\n";
    write_file(path_in("short.jsonl"), shorter.str());
    const CliResult missing = run_cli({"evaluate", "--gold", gold, "--pred",
                                       path_in("short.jsonl")});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("prediction records") != std::string::npos);
}

TEST_CASE("ablate trains the full grid") {
    const Corpus train = test::separable_corpus(2, 6, 61, "abtr");
    const Corpus held_out = test::separable_corpus(1, 4, 63, "abte");
    const std::string train_path = corpus_file("ab_train.jsonl", train);
    const std::string test_path = corpus_file("ab_test.jsonl", held_out);

    const CliResult r = run_cli({"ablate", "--train", train_path, "--test", test_path,
                                 "--json", "--max-iter", "60", "--l2", "0.01", "--C", "10"});
    REQUIRE(r.code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    REQUIRE(j["cells"].size() == 12);
    const char* variants[] = {"full", "-p", "-g", "-pg"};
    const char* frameworks[] = {"crf", "lr", "svm"};
    for (std::size_t k = 0; k < 12; ++k) {
        CHECK(j["cells"][k]["variant"] == variants[k / 3]);
        CHECK(j["cells"][k]["framework"] == frameworks[k % 3]);
        CHECK(j["cells"][k]["report"]["B"].contains("f1"));
        CHECK(j["cells"][k]["pass1_features"].get<int>() > 0);
    }

    const CliResult text = run_cli({"ablate", "--train", train_path, "--test", test_path,
                                    "--max-iter", "60", "--l2", "0.01", "--C", "10"});
    REQUIRE(text.code == 0);
    CHECK(text.out.find("# eduseg ablate") != std::string::npos);
    CHECK(text.out.find("CRF") != std::string::npos);
    CHECK(text.out.find("SVM-pg") != std::string::npos);

    const CliResult overlap = run_cli({"ablate", "--train", train_path, "--test", train_path,
                                       "--max-iter", "60"});
    CHECK(overlap.code == 1);
    CHECK(overlap.err.find("appears in both train and test") != std::string::npos);
}

TEST_CASE("stats matches direct bookkeeping") {
    const CliResult r = run_cli({"stats", "--input", small_corpus_path(), "--json"});
    REQUIRE(r.code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    const CorpusStats st = corpus_stats(small_corpus());
    CHECK(j["documents"] == st.documents);
    CHECK(j["sentences"] == st.sentences);
    CHECK(j["edus"] == st.edus);
    CHECK(j["boundaries"] == st.boundaries);
    CHECK(st.boundaries == st.edus - st.sentences);

    const CliResult text = run_cli({"stats", "--input", small_corpus_path()});
    REQUIRE(text.code == 0);
    CHECK(text.out.find("documents") != std::string::npos);
    CHECK(text.out.find(std::to_string(st.edus)) != std::string::npos);
}

TEST_CASE("convert builds the interchange file from parse and EDU lines") {
    write_file(path_in("conv_parses.txt"), kParseLines);
    write_file(path_in("conv_edus.txt"), kEduLines);
    const CliResult r = run_cli({"convert", "--parses", path_in("conv_parses.txt"), "--edus",
                                 path_in("conv_edus.txt"), "--output", path_in("conv.jsonl")});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("converted 2 documents, 3 sentences, 4 EDUs, 1 in-sentence boundaries") !=
          std::string::npos);

    std::istringstream parses(kParseLines), edus(kEduLines);
    const Corpus expected = load_parse_edu_pair(parses, edus, "doc");
    std::ostringstream direct;
    write_corpus_jsonl(direct, expected);
    CHECK(read_file(path_in("conv.jsonl")) == direct.str());

    // The converted file is a usable corpus.
    const CliResult st = run_cli({"stats", "--input", path_in("conv.jsonl"), "--json"});
    REQUIRE(st.code == 0);
    const ordered_json j = ordered_json::parse(st.out);
    CHECK(j["documents"] == 2);
    CHECK(j["sentences"] == 3);
    CHECK(j["edus"] == 4);
    CHECK(j["boundaries"] == 1);
}

TEST_CASE("bad usage exits nonzero with a diagnostic") {
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"frobnicate"}).code != 0);
    const CliResult incomplete = run_cli({"train", "--train", "x.jsonl"});
    CHECK(incomplete.code != 0);
    CHECK_FALSE(incomplete.err.empty());
    const CliResult badpath = run_cli({"train", "--train", path_in("absent.jsonl"),
                                       "--model-out", path_in("never.json")});
    CHECK(badpath.code == 1);
    CHECK(badpath.err.find("error:") != std::string::npos);
}
