#include "synthetic.hpp"

#include <algorithm>
#include <cctype>

#include "test_util.hpp"

namespace eduseg::test {

namespace {

std::string doc_name(const std::string& prefix, int number) {
    std::string n = std::to_string(number);
    while (n.size() < 4) n.insert(n.begin(), '0');
    return prefix + n;
}

AnnotatedSentence assemble(const std::vector<std::string>& tags, const std::vector<int>& starts,
                           const std::string& doc_id, int sent_id) {
    std::vector<std::string> words;
    words.reserve(tags.size());
    for (const std::string& t : tags) {
        std::string w = t;
        for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.push_back(w);
    }
    AnnotatedSentence as;
    as.sentence = make_sentence(flat_tree(tags, words), doc_id, sent_id);
    as.gold = spans_from_boundaries(starts, static_cast<int>(tags.size()));
    return as;
}

}  // namespace

Corpus separable_corpus(int documents, int sentences_per_doc, std::uint64_t seed,
                        const std::string& doc_prefix) {
    Rng rng(seed);
    static const char* fillers[] = {"FX", "FY", "FZ"};
    Corpus corpus;
    for (int d = 1; d <= documents; ++d) {
        const std::string doc_id = doc_name(doc_prefix, d);
        for (int s = 1; s <= sentences_per_doc; ++s) {
            const int n = rng.uniform_int(8, 14);
            std::vector<std::string> tags;
            std::vector<int> starts;
            for (int t = 1; t <= n; ++t) {
                if (t > 1 && rng.bernoulli(0.18)) {
                    tags.push_back("BB");
                    starts.push_back(t);
                } else {
                    tags.push_back(fillers[rng.uniform_int(0, 2)]);
                }
            }
            corpus.push_back(assemble(tags, starts, doc_id, s));
        }
    }
    return corpus;
}

Corpus periodic_corpus(int sentences, const std::string& doc_prefix) {
    Corpus corpus;
    for (int s = 1; s <= sentences; ++s) {
        const std::vector<std::string> tags(7, "FX");
        corpus.push_back(assemble(tags, {4, 7}, doc_name(doc_prefix, 1), s));
    }
    return corpus;
}

Corpus ablation_corpus(int documents, int sentences_per_doc, std::uint64_t seed,
                       const std::string& doc_prefix) {
    Rng rng(seed);
    static const char* fillers[] = {"FX", "FY", "FZ"};
    constexpr int kGap = 4;  // rhythm rule distance
    Corpus corpus;
    for (int d = 1; d <= documents; ++d) {
        const std::string doc_id = doc_name(doc_prefix, d);
        for (int s = 1; s <= sentences_per_doc; ++s) {
            const int n = rng.uniform_int(12, 18);
            std::vector<std::string> tags;
            tags.reserve(static_cast<std::size_t>(n));
            for (int t = 1; t <= n; ++t) {
                const double r = rng.uniform();
                if (r < 0.30)
                    tags.push_back("GT");
                else if (r < 0.46)
                    tags.push_back("RA");
                else if (r < 0.52)
                    tags.push_back("SA");
                else if (r < 0.68)
                    tags.push_back("RB");
                else
                    tags.push_back(fillers[rng.uniform_int(0, 2)]);
            }
            std::vector<int> starts;
            int last_anchor = 1;
            for (int t = 2; t <= n; ++t) {
                const bool pair_anchor = tags[static_cast<std::size_t>(t - 1)] == "RA" &&
                                         t >= 3 && tags[static_cast<std::size_t>(t - 3)] == "GT";
                const bool solo_anchor = tags[static_cast<std::size_t>(t - 1)] == "SA";
                const bool rhythm = tags[static_cast<std::size_t>(t - 1)] == "RB" &&
                                    t - last_anchor == kGap;
                if (pair_anchor || solo_anchor) {
                    starts.push_back(t);
                    last_anchor = t;
                } else if (rhythm) {
                    starts.push_back(t);  // rhythm does not reset the anchor
                }
            }
            corpus.push_back(assemble(tags, starts, doc_id, s));
        }
    }
    return corpus;
}

}  // namespace eduseg::test
