#ifndef EDUSEG_PIPELINE_HPP
#define EDUSEG_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eduseg/corpus.hpp"
#include "eduseg/crf.hpp"
#include "eduseg/eval.hpp"
#include "eduseg/features.hpp"
#include "eduseg/linear.hpp"

namespace eduseg {

enum class Framework { Crf, LogisticRegression, Svm };

std::string framework_name(Framework f);
Framework framework_from_name(const std::string& name);

struct PipelineConfig {
    Framework framework = Framework::Crf;
    bool pairing = true;
    bool global_pass = true;   // second pass over segmentation-derived features
    bool contextual = true;
    double l2 = 1.0;
    double C = 1.0;
    int max_iterations = 200;
    double tolerance = 1e-5;
    std::uint64_t seed = 1;
    int workers = 1;
    int min_feature_count = 1;
    bool crossfold_pass1 = false;  // jackknifed first-pass output for second-pass training

    bool operator==(const PipelineConfig&) const = default;
};

/// One trained pass: the chain model for the CRF framework, the
/// position-wise classifier otherwise.
struct PassModel {
    Framework framework = Framework::Crf;
    std::optional<CrfModel> crf;
    std::optional<LinearModel> linear;

    LabelSeq decode(const SequenceFeatures& chain) const;
};

struct PassDiagnostics {
    std::size_t vocabulary = 0;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
    bool single_label = false;  // classifier saw one label only; warn downstream
};

struct TrainDiagnostics {
    PassDiagnostics pass1;
    std::optional<PassDiagnostics> pass2;
};

/// Two-pass segmenter. The first pass sees token features only; the
/// second also sees features derived from the first pass's output.
/// Without the global pass the first pass's segmentation is final.
class Segmenter {
public:
    Segmenter(PipelineConfig config, FeatureVocabulary vocab1, PassModel pass1);
    Segmenter(PipelineConfig config, FeatureVocabulary vocab1, PassModel pass1,
              FeatureVocabulary vocab2, PassModel pass2);

    const PipelineConfig& config() const { return config_; }
    const FeatureVocabulary& pass1_vocabulary() const { return vocab1_; }
    const PassModel& pass1_model() const { return pass1_; }
    bool has_second_pass() const { return pass2_.has_value(); }
    const FeatureVocabulary& pass2_vocabulary() const;
    const PassModel& pass2_model() const;

    LabelSeq pass1_labels(const Sentence& sentence) const;
    EduSpans segment(const Sentence& sentence) const;
    std::vector<EduSpans> segment_corpus(const std::vector<Sentence>& sentences,
                                         int workers) const;

private:
    PipelineConfig config_;
    FeatureVocabulary vocab1_;
    PassModel pass1_;
    std::optional<FeatureVocabulary> vocab2_;
    std::optional<PassModel> pass2_;
};

Segmenter train_segmenter(const Corpus& corpus, const PipelineConfig& config,
                          TrainDiagnostics* diagnostics = nullptr);

/// Sentence-wise evaluation of a trained segmenter against gold spans.
EvalReport evaluate_segmenter(const Segmenter& segmenter, const Corpus& corpus, int workers);

/// The four feature regimes: everything, no pairing ("-p"), no second
/// pass ("-g"), neither ("-pg").
struct AblationVariant {
    std::string name;
    bool pairing = true;
    bool global_pass = true;
};

const std::vector<AblationVariant>& ablation_variants();

struct GridCell {
    Framework framework = Framework::Crf;
    std::string variant;
    EvalReport report;
    TrainDiagnostics diagnostics;
    std::vector<LabelSeq> predictions;       // per test sentence
    std::vector<double> document_boundary_f1;  // per test document
};

struct AblationGrid {
    std::vector<GridCell> cells;  // variant-major, framework within
    std::vector<LabelSeq> gold;
    std::vector<std::string> document_ids;  // order of first appearance
};

/// Trains and evaluates every framework under every feature regime with
/// identical data, seed and hyperparameters: 12 cells. Train and test
/// documents must not overlap.
AblationGrid run_ablation_grid(const Corpus& train, const Corpus& test,
                               const PipelineConfig& base);

}  // namespace eduseg

#endif
