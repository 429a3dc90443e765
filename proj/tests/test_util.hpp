#ifndef EDUSEG_TESTS_TEST_UTIL_HPP
#define EDUSEG_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "eduseg/corpus.hpp"
#include "eduseg/crf.hpp"

namespace eduseg::test {

/// mt19937_64 with portable helper draws (no std distributions, whose
/// outputs differ between standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(raw() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

inline Sentence make_sentence(const std::string& bracketed, const std::string& doc_id = "t",
                              int sent_id = 1) {
    return sentence_from_tree(parse_bracketed_tree(bracketed), doc_id, sent_id);
}

/// Flat parse (S (TAG1 w1) (TAG2 w2) ...) for inputs where tree shape
/// must carry no signal.
inline std::string flat_tree(const std::vector<std::string>& tags,
                             const std::vector<std::string>& words) {
    std::string out = "(S";
    for (std::size_t k = 0; k < tags.size(); ++k)
        out += " (" + tags[k] + " " + words[k] + ")";
    out += ")";
    return out;
}

/// Random nested constituency expression with n leaves.
inline std::string random_tree(Rng& rng, int n_leaves, int depth = 0) {
    static const char* tags[] = {"NN", "VB", "DT", "JJ", "IN", "RB"};
    static const char* cats[] = {"NP", "VP", "PP", "ADJP", "SBAR"};
    if (n_leaves == 1) {
        const std::string tag = tags[rng.uniform_int(0, 5)];
        return "(" + tag + " w" + std::to_string(rng.uniform_int(0, 30)) + ")";
    }
    int n_children = rng.uniform_int(2, std::min(4, n_leaves));
    std::vector<int> sizes(static_cast<std::size_t>(n_children), 1);
    for (int extra = n_leaves - n_children; extra > 0; --extra)
        ++sizes[static_cast<std::size_t>(rng.uniform_int(0, n_children - 1))];
    std::string out = "(";
    out += depth == 0 ? "S" : cats[rng.uniform_int(0, 4)];
    for (int size : sizes) out += " " + random_tree(rng, size, depth + 1);
    out += ")";
    return out;
}

/// Random sparse chain: L positions, ids in [0, F), values in [-2, 2].
inline SequenceFeatures random_chain(Rng& rng, int length, int num_features) {
    SequenceFeatures chain(static_cast<std::size_t>(length));
    for (auto& vec : chain) {
        const int k = rng.uniform_int(1, std::min(4, num_features));
        std::vector<int> ids;
        while (static_cast<int>(ids.size()) < k) {
            const int id = rng.uniform_int(0, num_features - 1);
            bool seen = false;
            for (int existing : ids) seen = seen || existing == id;
            if (!seen) ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        for (int id : ids) vec.entries.emplace_back(id, rng.uniform(-2.0, 2.0));
    }
    return chain;
}

inline std::vector<double> random_weights(Rng& rng, std::size_t count, double scale = 1.5) {
    std::vector<double> w(count);
    for (double& v : w) v = rng.uniform(-scale, scale);
    return w;
}

/// Chain score recomputed from the flat weight layout (emissions
/// feature-major by label, then the 2x2 transition table, then the two
/// initial weights), independently of CrfModel.
inline double chain_score_oracle(const std::vector<double>& w, int F,
                                 const SequenceFeatures& chain, const LabelSeq& labels) {
    const std::size_t F2 = static_cast<std::size_t>(F) * 2;
    double s = w[F2 + 4 + static_cast<std::size_t>(labels[0])];
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const std::size_t y = static_cast<std::size_t>(labels[i]);
        for (const auto& [id, value] : chain[i].entries)
            s += w[static_cast<std::size_t>(id) * 2 + y] * value;
        if (i > 0)
            s += w[F2 + static_cast<std::size_t>(labels[i - 1]) * 2 + y];
    }
    return s;
}

struct BruteForce {
    double log_z;
    double best_score;
    LabelSeq best;  // lexicographically smallest maximizer, C before B
};

/// Exhaustive enumeration over all 2^L labelings.
inline BruteForce brute_force_chain(const std::vector<double>& w, int F,
                                    const SequenceFeatures& chain) {
    const std::size_t L = chain.size();
    BruteForce out{-std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity(),
                   {}};
    if (L == 0) {
        out.log_z = 0.0;
        out.best_score = 0.0;
        return out;
    }
    double max_score = -std::numeric_limits<double>::infinity();
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(1) << L);
    // Masks enumerated in increasing numeric order visit labelings in
    // lexicographic order with C (= 0) first when bit k holds position k.
    for (std::size_t mask = 0; mask < (static_cast<std::size_t>(1) << L); ++mask) {
        LabelSeq labels(L);
        for (std::size_t k = 0; k < L; ++k)
            labels[k] = (mask >> k) & 1 ? Label::B : Label::C;
        const double s = chain_score_oracle(w, F, chain, labels);
        scores.push_back(s);
        if (s > max_score) max_score = s;
        if (s > out.best_score) {
            out.best_score = s;
            out.best = labels;
        }
    }
    // Lexicographic order of label sequences is NOT mask order beyond the
    // first bit; re-scan for the smallest sequence among exact maximizers.
    for (std::size_t mask = 0; mask < scores.size(); ++mask) {
        if (scores[mask] != out.best_score) continue;
        LabelSeq labels(L);
        for (std::size_t k = 0; k < L; ++k)
            labels[k] = (mask >> k) & 1 ? Label::B : Label::C;
        if (labels < out.best) out.best = labels;
    }
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - max_score);
    out.log_z = max_score + std::log(sum);
    return out;
}

/// Exact node marginals by enumeration.
inline std::vector<std::array<double, 2>> brute_force_node_marginals(
    const std::vector<double>& w, int F, const SequenceFeatures& chain) {
    const std::size_t L = chain.size();
    std::vector<std::array<double, 2>> node(L, {0.0, 0.0});
    const BruteForce bf = brute_force_chain(w, F, chain);
    for (std::size_t mask = 0; mask < (static_cast<std::size_t>(1) << L); ++mask) {
        LabelSeq labels(L);
        for (std::size_t k = 0; k < L; ++k)
            labels[k] = (mask >> k) & 1 ? Label::B : Label::C;
        const double p = std::exp(chain_score_oracle(w, F, chain, labels) - bf.log_z);
        for (std::size_t k = 0; k < L; ++k)
            node[k][static_cast<std::size_t>(labels[k])] += p;
    }
    return node;
}

}  // namespace eduseg::test

#endif
