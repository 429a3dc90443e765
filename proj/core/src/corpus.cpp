#include "eduseg/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "eduseg/errors.hpp"

namespace eduseg {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string lowercased(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct RawNode {
    std::string label;
    std::string word;
    std::vector<int> children;
};

}  // namespace

ParseTree parse_bracketed_tree(const std::string& text) {
    std::size_t pos = 0;
    const std::size_t end = text.size();

    auto skip_ws = [&] {
        while (pos < end && is_ws(text[pos])) ++pos;
    };
    auto fail = [&](const std::string& what) -> void {
        throw FormatError("bracketed tree: " + what + " at offset " + std::to_string(pos));
    };
    auto read_atom = [&]() -> std::string {
        std::size_t start = pos;
        while (pos < end && !is_ws(text[pos]) && text[pos] != '(' && text[pos] != ')') ++pos;
        return text.substr(start, pos - start);
    };

    std::vector<RawNode> raw;

    // Recursive-descent over "( label (child...)+ )" | "( label word )".
    auto parse_node = [&](auto&& self) -> int {
        skip_ws();
        if (pos >= end || text[pos] != '(') fail("expected '('");
        ++pos;
        skip_ws();
        std::string label = read_atom();
        skip_ws();
        int id = static_cast<int>(raw.size());
        raw.push_back(RawNode{label, "", {}});
        if (pos < end && text[pos] == '(') {
            while (pos < end && text[pos] == '(') {
                int child = self(self);
                raw[id].children.push_back(child);
                skip_ws();
            }
        } else {
            std::string word = read_atom();
            if (word.empty()) fail("expected word or subtree");
            raw[id].word = word;
            skip_ws();
        }
        if (pos >= end || text[pos] != ')') fail("expected ')'");
        ++pos;
        return id;
    };

    skip_ws();
    if (pos >= end) throw FormatError("bracketed tree: empty input");
    int root = parse_node(parse_node);
    skip_ws();
    if (pos != end) fail("trailing characters after root");

    // Unwrap "( (S ...) )" wrappers written by some parsers.
    while (raw[root].label.empty() && raw[root].children.size() == 1) {
        root = raw[root].children[0];
    }
    if (raw[root].word.empty() && raw[root].children.empty())
        throw FormatError("bracketed tree: root has neither word nor children");

    // Flatten into ParseTree order (preorder from the chosen root) and
    // assign spans bottom-up.
    std::vector<TreeNode> nodes;
    std::vector<int> leaf_nodes;
    auto build = [&](auto&& self, int raw_id, int parent, int depth) -> int {
        const RawNode& r = raw[raw_id];
        int id = static_cast<int>(nodes.size());
        nodes.push_back(TreeNode{r.label, 0, 0, parent, depth, {}, r.word});
        if (r.children.empty()) {
            int leaf = static_cast<int>(leaf_nodes.size()) + 1;
            nodes[id].first = nodes[id].last = leaf;
            leaf_nodes.push_back(id);
        } else {
            for (int c : r.children) {
                int cid = self(self, c, id, depth + 1);
                nodes[id].children.push_back(cid);
            }
            nodes[id].first = nodes[nodes[id].children.front()].first;
            nodes[id].last = nodes[nodes[id].children.back()].last;
        }
        return id;
    };
    build(build, root, -1, 0);
    return ParseTree(std::move(nodes), std::move(leaf_nodes));
}

Sentence sentence_from_tree(ParseTree tree, std::string doc_id, int sent_id) {
    Sentence s;
    s.doc_id = std::move(doc_id);
    s.sent_id = sent_id;
    const int n = tree.leaf_count();
    s.tokens.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const TreeNode& pre = tree.node(tree.preterminal_of(i));
        Token t;
        t.index = i;
        t.form = pre.word;
        t.lemma = lowercased(pre.word);
        t.pos = pre.label;
        if (t.form.empty())
            throw ValidationError("token " + std::to_string(i) + " has empty form");
        s.tokens.push_back(std::move(t));
    }
    s.tree = std::move(tree);
    return s;
}

void validate_spans(const EduSpans& spans, int n_tokens) {
    if (n_tokens < 1) throw ValidationError("sentence must have at least one token");
    if (spans.empty()) throw ValidationError("EDU span list is empty");
    int expect = 1;
    for (const auto& [start, stop] : spans) {
        if (start != expect)
            throw ValidationError("EDU spans are not a partition of [1," +
                                  std::to_string(n_tokens) + "]: span starts at " +
                                  std::to_string(start) + " where " + std::to_string(expect) +
                                  " was expected");
        if (stop < start)
            throw ValidationError("EDU span (" + std::to_string(start) + "," +
                                  std::to_string(stop) + ") is empty");
        expect = stop + 1;
    }
    if (expect != n_tokens + 1)
        throw ValidationError("EDU spans end at " + std::to_string(expect - 1) +
                              " instead of " + std::to_string(n_tokens));
}

LabelSeq spans_to_labels(const EduSpans& spans, int n_tokens) {
    validate_spans(spans, n_tokens);
    LabelSeq labels(static_cast<std::size_t>(n_tokens - 1), Label::C);
    for (std::size_t k = 1; k < spans.size(); ++k) {
        // Span starting at token t flips the entry before token t.
        labels[static_cast<std::size_t>(spans[k].first) - 2] = Label::B;
    }
    return labels;
}

EduSpans labels_to_spans(const LabelSeq& labels, int n_tokens) {
    if (n_tokens < 1) throw ValidationError("sentence must have at least one token");
    if (static_cast<int>(labels.size()) != n_tokens - 1)
        throw ValidationError("label sequence has length " + std::to_string(labels.size()) +
                              ", expected " + std::to_string(n_tokens - 1));
    EduSpans spans;
    int start = 1;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        if (labels[i] == Label::B) {
            spans.emplace_back(start, i + 1);
            start = i + 2;
        }
    }
    spans.emplace_back(start, n_tokens);
    return spans;
}

std::vector<int> boundary_token_indices(const EduSpans& spans) {
    std::vector<int> out;
    for (std::size_t k = 1; k < spans.size(); ++k) out.push_back(spans[k].first);
    return out;
}

EduSpans spans_from_boundaries(const std::vector<int>& boundaries, int n_tokens) {
    EduSpans spans;
    int start = 1;
    for (int b : boundaries) {
        if (b <= start || b > n_tokens)
            throw ValidationError("boundary index " + std::to_string(b) +
                                  " is out of order or out of range");
        spans.emplace_back(start, b - 1);
        start = b;
    }
    spans.emplace_back(start, n_tokens);
    return spans;
}

EduSpans align_edu_strings(const Sentence& sentence, const std::vector<std::string>& edu_texts) {
    if (edu_texts.empty()) throw AlignmentError("no EDU texts supplied");

    // Character cursor over the whitespace-stripped token stream.
    int tok = 0;                // 0-based token under the cursor
    std::size_t off = 0;        // offset into that token's form
    const auto& tokens = sentence.tokens;
    const int n = sentence.size();

    EduSpans spans;
    int edu_start = 1;
    for (std::size_t e = 0; e < edu_texts.size(); ++e) {
        for (char raw : edu_texts[e]) {
            if (is_ws(raw)) continue;
            if (tok >= n)
                throw AlignmentError("EDU " + std::to_string(e + 1) +
                                     " continues past the last token of sentence " +
                                     sentence.doc_id + ":" + std::to_string(sentence.sent_id));
            const std::string& form = tokens[tok].form;
            if (form[off] != raw)
                throw AlignmentError("EDU text diverges from token " +
                                     std::to_string(tok + 1) + " ('" + form + "') in sentence " +
                                     sentence.doc_id + ":" + std::to_string(sentence.sent_id));
            if (++off == form.size()) {
                ++tok;
                off = 0;
            }
        }
        if (off != 0)
            throw AlignmentError("EDU " + std::to_string(e + 1) +
                                 " boundary falls inside token " + std::to_string(tok + 1) +
                                 " ('" + tokens[tok].form + "')");
        if (tok == edu_start - 1)
            throw AlignmentError("EDU " + std::to_string(e + 1) + " is empty");
        spans.emplace_back(edu_start, tok);
        edu_start = tok + 1;
    }
    if (tok != n)
        throw AlignmentError("EDU texts end at token " + std::to_string(tok) +
                             " but the sentence has " + std::to_string(n) + " tokens");
    validate_spans(spans, n);
    return spans;
}

std::vector<EduSpans> align_document_edus(const std::vector<Sentence>& sentences,
                                          const std::vector<std::string>& edu_texts) {
    // Distribute EDUs over sentences by character count, then align each
    // sentence with its slice. A slice mismatch means an EDU straddles a
    // sentence boundary.
    auto stripped_len = [](const std::string& s) {
        std::size_t k = 0;
        for (char c : s)
            if (!is_ws(c)) ++k;
        return k;
    };

    std::vector<EduSpans> out;
    std::size_t edu_idx = 0;
    for (const Sentence& sent : sentences) {
        std::size_t want = 0;
        for (const Token& t : sent.tokens) want += t.form.size();
        std::vector<std::string> slice;
        std::size_t got = 0;
        while (got < want) {
            if (edu_idx >= edu_texts.size())
                throw AlignmentError("document ran out of EDU texts inside sentence " +
                                     sent.doc_id + ":" + std::to_string(sent.sent_id));
            std::size_t len = stripped_len(edu_texts[edu_idx]);
            if (got + len > want)
                throw AlignmentError("EDU crosses the boundary of sentence " + sent.doc_id +
                                     ":" + std::to_string(sent.sent_id) +
                                     "; EDUs may not span sentences");
            slice.push_back(edu_texts[edu_idx]);
            got += len;
            ++edu_idx;
        }
        out.push_back(align_edu_strings(sent, slice));
    }
    if (edu_idx != edu_texts.size())
        throw AlignmentError("document has " + std::to_string(edu_texts.size() - edu_idx) +
                             " EDU texts left over after the last sentence");
    return out;
}

std::string bracketed_render(const Sentence& sentence, const EduSpans& spans) {
    validate_spans(spans, sentence.size());
    std::string out;
    for (std::size_t k = 0; k < spans.size(); ++k) {
        if (k > 0) out += ' ';
        out += "[";
        for (int t = spans[k].first; t <= spans[k].second; ++t) {
            out += ' ';
            out += sentence.tokens[static_cast<std::size_t>(t - 1)].form;
        }
        out += " ]";
    }
    return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats st;
    std::string last_doc;
    for (const auto& [sentence, gold] : corpus) {
        validate_spans(gold, sentence.size());
        if (sentence.doc_id != last_doc) {
            ++st.documents;
            last_doc = sentence.doc_id;
        }
        ++st.sentences;
        st.edus += static_cast<std::int64_t>(gold.size());
        st.boundaries += static_cast<std::int64_t>(gold.size()) - 1;
    }
    if (st.boundaries != st.edus - st.sentences)
        throw ValidationError("corpus bookkeeping violated: boundaries != EDUs - sentences");
    return st;
}

// --- interchange format ---

namespace {

using json = nlohmann::ordered_json;

json sentence_to_json(const AnnotatedSentence& rec) {
    json tokens = json::array();
    for (const Token& t : rec.sentence.tokens) {
        tokens.push_back({{"form", t.form}, {"lemma", t.lemma}, {"pos", t.pos}});
    }
    return json{{"doc_id", rec.sentence.doc_id},
                {"sent_id", rec.sentence.sent_id},
                {"tokens", std::move(tokens)},
                {"tree", rec.sentence.tree.serialize()},
                {"boundaries", boundary_token_indices(rec.gold)}};
}

AnnotatedSentence sentence_from_json(const json& j, const std::string& where) {
    try {
        ParseTree tree = parse_bracketed_tree(j.at("tree").get<std::string>());
        Sentence s = sentence_from_tree(std::move(tree), j.at("doc_id").get<std::string>(),
                                        j.at("sent_id").get<int>());
        const auto& toks = j.at("tokens");
        if (static_cast<int>(toks.size()) != s.size())
            throw ValidationError("record lists " + std::to_string(toks.size()) +
                                  " tokens but the tree has " + std::to_string(s.size()) +
                                  " leaves");
        for (int i = 0; i < s.size(); ++i) {
            const auto& t = toks[i];
            const std::string form = t.at("form").get<std::string>();
            if (form != s.tokens[i].form)
                throw ValidationError("token " + std::to_string(i + 1) + " form '" + form +
                                      "' does not match tree leaf '" + s.tokens[i].form + "'");
            if (t.contains("lemma")) s.tokens[i].lemma = t.at("lemma").get<std::string>();
            if (t.contains("pos")) s.tokens[i].pos = t.at("pos").get<std::string>();
        }
        std::vector<int> bounds = j.value("boundaries", std::vector<int>{});
        EduSpans gold = spans_from_boundaries(bounds, s.size());
        return AnnotatedSentence{std::move(s), std::move(gold)};
    } catch (const json::exception& e) {
        throw FormatError(where + ": bad sentence record: " + e.what());
    }
}

}  // namespace

Corpus read_corpus_jsonl(std::istream& in, const std::string& source_name) {
    Corpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
        corpus.push_back(
            sentence_from_json(j, source_name + ":" + std::to_string(line_no)));
    }
    return corpus;
}

Corpus read_corpus_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open corpus file: " + path);
    return read_corpus_jsonl(in, path);
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
    for (const auto& rec : corpus) out << sentence_to_json(rec).dump() << '\n';
}

void write_corpus_jsonl_file(const std::string& path, const Corpus& corpus) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open output file: " + path);
    write_corpus_jsonl(out, corpus);
}

std::vector<Sentence> read_parse_file(std::istream& in, const std::string& doc_id_prefix) {
    std::vector<Sentence> sentences;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ParseTree tree;
        try {
            tree = parse_bracketed_tree(line);
        } catch (const FormatError& e) {
            throw FormatError("parse file line " + std::to_string(line_no) + ": " + e.what());
        }
        sentences.push_back(sentence_from_tree(std::move(tree), doc_id_prefix,
                                               static_cast<int>(sentences.size()) + 1));
    }
    return sentences;
}

std::vector<Sentence> read_parse_file_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open parse file: " + path);
    return read_parse_file(in, path);
}

Corpus load_parse_edu_pair(std::istream& parses, std::istream& edus,
                           const std::string& doc_id_prefix) {
    std::vector<Sentence> sentences = read_parse_file(parses, doc_id_prefix);

    // EDU side: documents separated by blank lines.
    std::vector<std::vector<std::string>> documents;
    documents.emplace_back();
    std::string line;
    while (std::getline(edus, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            if (!documents.back().empty()) documents.emplace_back();
        } else {
            documents.back().push_back(line);
        }
    }
    if (documents.back().empty()) documents.pop_back();
    if (documents.empty()) throw AlignmentError("EDU file contains no documents");

    Corpus corpus;
    std::size_t sent_idx = 0;
    for (std::size_t d = 0; d < documents.size(); ++d) {
        std::ostringstream doc_id;
        doc_id << doc_id_prefix;
        doc_id.width(4);
        doc_id.fill('0');
        doc_id << d + 1;

        // Consume sentences until this document's EDU characters are spent.
        std::size_t want = 0;
        for (const std::string& t : documents[d])
            for (char c : t)
                if (!is_ws(c)) ++want;
        std::vector<Sentence> doc_sents;
        std::size_t got = 0;
        while (got < want) {
            if (sent_idx >= sentences.size())
                throw AlignmentError("EDU document " + std::to_string(d + 1) +
                                     " needs more sentences than the parse file provides");
            Sentence s = sentences[sent_idx++];
            for (const Token& t : s.tokens) got += t.form.size();
            s.doc_id = doc_id.str();
            s.sent_id = static_cast<int>(doc_sents.size()) + 1;
            doc_sents.push_back(std::move(s));
        }
        if (got != want)
            throw AlignmentError("EDU document " + std::to_string(d + 1) +
                                 " does not end on a sentence boundary");
        std::vector<EduSpans> spans = align_document_edus(doc_sents, documents[d]);
        for (std::size_t k = 0; k < doc_sents.size(); ++k)
            corpus.push_back(AnnotatedSentence{std::move(doc_sents[k]), std::move(spans[k])});
    }
    if (sent_idx != sentences.size())
        throw AlignmentError("parse file has " + std::to_string(sentences.size() - sent_idx) +
                             " sentences beyond the last EDU document");
    return corpus;
}

Corpus load_parse_edu_pair_files(const std::string& parse_path, const std::string& edu_path) {
    std::ifstream parses(parse_path);
    if (!parses) throw ArgumentError("cannot open parse file: " + parse_path);
    std::ifstream edus(edu_path);
    if (!edus) throw ArgumentError("cannot open EDU file: " + edu_path);
    return load_parse_edu_pair(parses, edus);
}

}  // namespace eduseg
