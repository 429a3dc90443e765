#include "eduseg/features.hpp"

#include <algorithm>

#include "eduseg/errors.hpp"

namespace eduseg {

namespace {

/// Feature names may not contain whitespace, so production rules are
/// written "S->NP_VP".
std::string sanitize_rule(const std::string& rule) {
    std::string out;
    out.reserve(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        if (rule.compare(k, 4, " -> ") == 0) {
            out += "->";
            k += 3;
        } else if (rule[k] == ' ') {
            out += '_';
        } else {
            out += rule[k];
        }
    }
    return out;
}

void token_basic(const Sentence& sentence, int token, const std::string& role, FeatureList& out) {
    const Token& tok = sentence.tokens[static_cast<std::size_t>(token - 1)];
    const ParseTree& tree = sentence.tree;
    const int n = sentence.size();

    out.push_back({role + ":pos=" + tok.pos});
    out.push_back({role + ":lemma=" + tok.lemma});
    out.push_back({role + ":bos=" + (token == 1 ? std::string("1") : std::string("0"))});
    out.push_back({role + ":eos=" + (token == n ? std::string("1") : std::string("0"))});

    const int start = tree.largest_constituent_starting_at(token);
    const int end = tree.largest_constituent_ending_at(token);
    out.push_back({role + ":start_tag=" + tree.node(start).label});
    out.push_back({role + ":end_tag=" + tree.node(end).label});
    out.push_back({role + ":start_depth=" + std::to_string(tree.node_depth(start))});
    out.push_back({role + ":end_depth=" + std::to_string(tree.node_depth(end))});
    out.push_back({role + ":start_rule=" + sanitize_rule(tree.production_rule(start))});
    out.push_back({role + ":end_rule=" + sanitize_rule(tree.production_rule(end))});
}

struct Neighbors {
    int left;   // nearest EDU start at or before the token
    int right;  // nearest EDU start after it; n + 1 when none
};

Neighbors edu_neighbors(const EduSpans& boundaries, int token, int n) {
    Neighbors nb{1, n + 1};
    for (const auto& span : boundaries) {
        if (span.first <= token)
            nb.left = std::max(nb.left, span.first);
        else
            nb.right = std::min(nb.right, span.first);
    }
    return nb;
}

void token_global(const Sentence& sentence, int token, const EduSpans& boundaries,
                  const std::string& role, FeatureList& out) {
    const ParseTree& tree = sentence.tree;
    const int n = sentence.size();
    const Neighbors nb = edu_neighbors(boundaries, token, n);

    const Token& left_tok = sentence.tokens[static_cast<std::size_t>(nb.left - 1)];
    out.push_back({role + ":lb_pos=" + left_tok.pos});
    out.push_back({role + ":lb_lemma=" + left_tok.lemma});
    if (nb.right <= n) {
        const Token& right_tok = sentence.tokens[static_cast<std::size_t>(nb.right - 1)];
        out.push_back({role + ":rb_pos=" + right_tok.pos});
        out.push_back({role + ":rb_lemma=" + right_tok.lemma});
    } else {
        out.push_back({role + ":rb_pos=<END>"});
        out.push_back({role + ":rb_lemma=<END>"});
    }

    const int ldist = token - nb.left;
    const int rdist = nb.right - token;
    out.push_back({role + ":ldist=" + distance_bucket(ldist)});
    out.push_back({role + ":rdist=" + distance_bucket(rdist)});
    out.push_back({role + ":ldist_raw", static_cast<double>(ldist)});
    out.push_back({role + ":rdist_raw", static_cast<double>(rdist)});

    const int rclip = std::min(nb.right, n);
    out.push_back({role + ":lconst=" +
                   std::to_string(tree.count_constituents_over(nb.left, token))});
    out.push_back({role + ":rconst=" +
                   std::to_string(tree.count_constituents_over(token, rclip))});
    out.push_back({role + ":lspan_tag=" +
                   tree.node(tree.lowest_spanning_subtree(nb.left, token)).label});
    out.push_back({role + ":rspan_tag=" +
                   tree.node(tree.lowest_spanning_subtree(token, rclip)).label});
}

void check_position(const Sentence& sentence, int position) {
    if (position < 1 || position >= sentence.size())
        throw IndexError("label position " + std::to_string(position) +
                         " outside 1.." + std::to_string(sentence.size() - 1));
}

std::vector<FeatureList> base_lists(const Sentence& sentence, const FeatureConfig& config,
                                    const EduSpans* initial) {
    std::vector<FeatureList> lists;
    const int n = sentence.size();
    lists.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int i = 1; i < n; ++i) {
        FeatureList fl = basic_features(sentence, i, config.pairing);
        if (config.global) {
            FeatureList gl = global_features(sentence, i, *initial, config.pairing);
            fl.insert(fl.end(), gl.begin(), gl.end());
        }
        lists.push_back(std::move(fl));
    }
    return lists;
}

}  // namespace

int FeatureVocabulary::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    if (frozen_) throw StateError("cannot intern into a frozen vocabulary: " + name);
    const int id = static_cast<int>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    return id;
}

std::optional<int> FeatureVocabulary::lookup(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& FeatureVocabulary::name(int id) const {
    if (id < 0 || id >= static_cast<int>(names_.size()))
        throw IndexError("feature id " + std::to_string(id) + " out of range");
    return names_[static_cast<std::size_t>(id)];
}

FeatureVocabulary FeatureVocabulary::from_names(std::vector<std::string> names, bool frozen) {
    FeatureVocabulary vocab;
    for (std::size_t k = 0; k < names.size(); ++k) {
        auto [it, inserted] = vocab.ids_.emplace(names[k], static_cast<int>(k));
        if (!inserted) throw ValidationError("duplicate feature name: " + names[k]);
    }
    vocab.names_ = std::move(names);
    vocab.frozen_ = frozen;
    return vocab;
}

std::string distance_bucket(int distance) {
    if (distance < 0) throw ArgumentError("negative distance");
    if (distance >= 5) return "5+";
    return std::to_string(distance);
}

FeatureList basic_features(const Sentence& sentence, int position, bool pairing) {
    check_position(sentence, position);
    FeatureList out;
    if (pairing) {
        token_basic(sentence, position, "L", out);
        token_basic(sentence, position + 1, "R", out);
    } else {
        token_basic(sentence, position + 1, "T", out);
    }
    return out;
}

FeatureList global_features(const Sentence& sentence, int position, const EduSpans& boundaries,
                            bool pairing) {
    check_position(sentence, position);
    validate_spans(boundaries, sentence.size());
    FeatureList out;
    if (pairing) {
        token_global(sentence, position, boundaries, "L", out);
        token_global(sentence, position + 1, boundaries, "R", out);
    } else {
        token_global(sentence, position + 1, boundaries, "T", out);
    }
    return out;
}

std::vector<FeatureList> contextualize(const std::vector<FeatureList>& positions) {
    std::vector<FeatureList> out;
    out.reserve(positions.size());
    for (std::size_t p = 0; p < positions.size(); ++p) {
        FeatureList fl = positions[p];
        if (p > 0) {
            for (const Feature& f : positions[p - 1])
                fl.push_back({"prev:" + f.name, f.value});
        } else {
            fl.push_back({"prev:ABSENT"});
        }
        if (p + 1 < positions.size()) {
            for (const Feature& f : positions[p + 1])
                fl.push_back({"next:" + f.name, f.value});
        } else {
            fl.push_back({"next:ABSENT"});
        }
        out.push_back(std::move(fl));
    }
    return out;
}

std::vector<FeatureList> extract_features(const Sentence& sentence, const FeatureConfig& config) {
    if (config.global)
        throw ArgumentError("global features require an initial segmentation");
    std::vector<FeatureList> lists = base_lists(sentence, config, nullptr);
    if (config.contextual) lists = contextualize(lists);
    return lists;
}

std::vector<FeatureList> extract_features(const Sentence& sentence, const FeatureConfig& config,
                                          const EduSpans& initial) {
    if (!config.global)
        throw ArgumentError("initial segmentation given but global features are disabled");
    std::vector<FeatureList> lists = base_lists(sentence, config, &initial);
    if (config.contextual) lists = contextualize(lists);
    return lists;
}

FeatureVector index_features(const FeatureList& features, FeatureVocabulary& vocab,
                             bool training) {
    FeatureVector vec;
    vec.entries.reserve(features.size());
    for (const Feature& f : features) {
        if (f.value == 0.0) continue;
        int id;
        if (training) {
            id = vocab.intern(f.name);
        } else {
            auto found = vocab.lookup(f.name);
            if (!found) continue;
            id = *found;
        }
        vec.entries.emplace_back(id, f.value);
    }
    std::stable_sort(vec.entries.begin(), vec.entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    // first occurrence of a name wins
    vec.entries.erase(std::unique(vec.entries.begin(), vec.entries.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; }),
                      vec.entries.end());
    return vec;
}

FeatureVector index_features(const std::vector<std::string>& names, FeatureVocabulary& vocab,
                             bool training) {
    FeatureList fl;
    fl.reserve(names.size());
    for (const std::string& n : names) fl.push_back({n});
    return index_features(fl, vocab, training);
}

FeatureVector index_features(const FeatureList& features, const FeatureVocabulary& vocab) {
    FeatureVector vec;
    vec.entries.reserve(features.size());
    for (const Feature& f : features) {
        if (f.value == 0.0) continue;
        auto found = vocab.lookup(f.name);
        if (!found) continue;
        vec.entries.emplace_back(*found, f.value);
    }
    std::stable_sort(vec.entries.begin(), vec.entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    vec.entries.erase(std::unique(vec.entries.begin(), vec.entries.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; }),
                      vec.entries.end());
    return vec;
}

}  // namespace eduseg
