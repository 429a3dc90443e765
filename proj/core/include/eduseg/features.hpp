#ifndef EDUSEG_FEATURES_HPP
#define EDUSEG_FEATURES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eduseg/corpus.hpp"

namespace eduseg {

/// One named feature with its value; indicator features carry 1.0.
struct Feature {
    std::string name;
    double value = 1.0;
};

using FeatureList = std::vector<Feature>;

/// Sparse indexed vector, sorted by id, no zero entries, no duplicates.
struct FeatureVector {
    std::vector<std::pair<int, double>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

/// Dense string <-> id map. Training interns new strings; once frozen,
/// unseen strings are dropped instead of allocated.
class FeatureVocabulary {
public:
    int intern(const std::string& name);
    std::optional<int> lookup(const std::string& name) const;
    const std::string& name(int id) const;

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }
    std::size_t size() const { return names_.size(); }

    const std::vector<std::string>& names() const { return names_; }

    static FeatureVocabulary from_names(std::vector<std::string> names, bool frozen);

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> names_;
    bool frozen_ = false;
};

struct FeatureConfig {
    bool pairing = true;
    bool global = false;
    bool contextual = true;
    int context_window = 1;  // fixed

    bool operator==(const FeatureConfig&) const = default;
};

/// Token-pair features at label position i (1 <= i <= n-1). With pairing
/// the pair is (token i, token i+1) under "L:"/"R:" prefixes; without it
/// only token i+1 is described, under "T:".
FeatureList basic_features(const Sentence& sentence, int position, bool pairing);

/// Segmentation-derived features relative to an initial EDU segmentation.
/// For each token in scope: identity of the nearest EDU start at-or-before
/// it and of the nearest start strictly after it (the end of the sentence
/// acts as the right sentinel), token distances to both, the constituent
/// count and the lowest spanning subtree tag between the token and each.
FeatureList global_features(const Sentence& sentence, int position, const EduSpans& boundaries,
                            bool pairing);

/// Adds each position's neighbor lists under "prev:"/"next:" prefixes;
/// edge positions receive ABSENT markers.
std::vector<FeatureList> contextualize(const std::vector<FeatureList>& positions);

/// All label positions of one sentence under a configuration. `initial`
/// is required exactly when config.global is set.
std::vector<FeatureList> extract_features(const Sentence& sentence, const FeatureConfig& config);
std::vector<FeatureList> extract_features(const Sentence& sentence, const FeatureConfig& config,
                                          const EduSpans& initial);

/// Maps names to ids. Training mode interns; otherwise unseen names are
/// dropped. Duplicate names collapse to the first occurrence and zero
/// values are not stored.
FeatureVector index_features(const FeatureList& features, FeatureVocabulary& vocab, bool training);
FeatureVector index_features(const std::vector<std::string>& names, FeatureVocabulary& vocab,
                             bool training);

/// Lookup-only indexing against a fixed vocabulary; unseen names drop.
FeatureVector index_features(const FeatureList& features, const FeatureVocabulary& vocab);

/// Distance bucket used by global features: "0".."4" then "5+".
std::string distance_bucket(int distance);

}  // namespace eduseg

#endif
