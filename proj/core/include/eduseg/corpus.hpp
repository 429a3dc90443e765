#ifndef EDUSEG_CORPUS_HPP
#define EDUSEG_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eduseg/tree.hpp"

namespace eduseg {

/// Per-position boundary decision. Entry i (1-based) of a label sequence
/// governs the slot before token i+1; the first token is never labeled.
enum class Label : std::uint8_t { C = 0, B = 1 };

using LabelSeq = std::vector<Label>;

/// (start, end) token spans, 1-based inclusive, partitioning the sentence.
using TokenSpan = std::pair<int, int>;
using EduSpans = std::vector<TokenSpan>;

struct Token {
    int index = 0;  // 1-based position in the sentence
    std::string form;
    std::string lemma;
    std::string pos;
};

struct Sentence {
    std::vector<Token> tokens;
    ParseTree tree;
    std::string doc_id;
    int sent_id = 0;

    int size() const { return static_cast<int>(tokens.size()); }
};

struct AnnotatedSentence {
    Sentence sentence;
    EduSpans gold;
};

using Corpus = std::vector<AnnotatedSentence>;

/// Reads a single-rooted bracketed constituency expression. Preterminal
/// labels become POS tags; leaf order gives the token order. A wrapper root
/// with an empty label and one child (PTB file style) is unwrapped.
ParseTree parse_bracketed_tree(const std::string& text);

/// Builds a Sentence from a tree: forms from the leaves, POS from the
/// preterminals, lemma defaulting to the lowercased form.
Sentence sentence_from_tree(ParseTree tree, std::string doc_id, int sent_id);

void validate_spans(const EduSpans& spans, int n_tokens);

LabelSeq spans_to_labels(const EduSpans& spans, int n_tokens);
EduSpans labels_to_spans(const LabelSeq& labels, int n_tokens);

/// In-sentence EDU start indices (every span start except token 1).
std::vector<int> boundary_token_indices(const EduSpans& spans);
EduSpans spans_from_boundaries(const std::vector<int>& boundaries, int n_tokens);

/// Maps per-EDU text onto token spans. Comparison ignores all whitespace;
/// an EDU edge inside a token or any character mismatch is an error naming
/// the offending token.
EduSpans align_edu_strings(const Sentence& sentence, const std::vector<std::string>& edu_texts);

/// Splits one document's EDU list across its sentences and aligns each
/// piece. An EDU crossing a sentence boundary is rejected.
std::vector<EduSpans> align_document_edus(const std::vector<Sentence>& sentences,
                                          const std::vector<std::string>& edu_texts);

/// "[ tok tok ] [ tok ... ]" rendering of a segmentation.
std::string bracketed_render(const Sentence& sentence, const EduSpans& spans);

struct CorpusStats {
    std::int64_t documents = 0;
    std::int64_t sentences = 0;
    std::int64_t edus = 0;
    std::int64_t boundaries = 0;  // in-sentence only
};

/// Counts sentences, EDUs and in-sentence boundaries. Any valid corpus
/// satisfies boundaries == edus - sentences; violation is a ValidationError.
CorpusStats corpus_stats(const Corpus& corpus);

// --- line-delimited interchange format (see docs/formats.md) ---

Corpus read_corpus_jsonl(std::istream& in, const std::string& source_name = "<stream>");
Corpus read_corpus_jsonl_file(const std::string& path);
void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);
void write_corpus_jsonl_file(const std::string& path, const Corpus& corpus);

/// Loads the parse-file / EDU-file pair format: one bracketed tree per line
/// on the parse side, one EDU text per line on the EDU side with blank
/// lines separating documents. Documents consume sentences in order.
Corpus load_parse_edu_pair(std::istream& parses, std::istream& edus,
                           const std::string& doc_id_prefix = "doc");
Corpus load_parse_edu_pair_files(const std::string& parse_path, const std::string& edu_path);

/// Parse file only (no gold boundaries); each line becomes one sentence
/// with a single-EDU placeholder that callers typically ignore.
std::vector<Sentence> read_parse_file(std::istream& in, const std::string& doc_id_prefix = "doc");
std::vector<Sentence> read_parse_file_path(const std::string& path);

}  // namespace eduseg

#endif
