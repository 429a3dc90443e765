#ifndef EDUSEG_CRF_HPP
#define EDUSEG_CRF_HPP

#include <array>
#include <vector>

#include "eduseg/corpus.hpp"
#include "eduseg/features.hpp"
#include "eduseg/optimize.hpp"

namespace eduseg {

/// Indexed features for every label position of one sentence.
using SequenceFeatures = std::vector<FeatureVector>;

/// Linear-chain model over the two labels. Parameters, in one flat
/// vector: per-feature emission weights for each label (feature-major),
/// the 2x2 transition matrix (row = previous label), and the two initial
/// label weights.
class CrfModel {
public:
    CrfModel(int num_features, std::vector<double> weights);
    explicit CrfModel(int num_features);

    int num_features() const { return num_features_; }
    const std::vector<double>& weights() const { return weights_; }

    static std::size_t parameter_count(int num_features);

    double emission(int feature, Label y) const;
    double transition(Label prev, Label next) const;
    double begin(Label y) const;

    /// Unnormalized log score of one labeling of a chain.
    double sequence_score(const SequenceFeatures& chain, const LabelSeq& labels) const;

    struct Marginals {
        double log_z = 0.0;
        std::vector<std::array<double, 2>> node;  // [position][label]
        std::vector<std::array<double, 4>> edge;  // [position][prev * 2 + next]
    };

    /// Exact inference by the forward-backward recursions in log space.
    Marginals marginals(const SequenceFeatures& chain) const;

    double log_partition(const SequenceFeatures& chain) const;

    /// Highest-scoring labeling. Among ties, the sequence that is
    /// lexicographically smallest with C before B.
    LabelSeq decode(const SequenceFeatures& chain) const;

private:
    double node_score(const FeatureVector& x, int y) const;
    void check_chain(const SequenceFeatures& chain) const;

    int num_features_;
    std::vector<double> weights_;
};

struct CrfTrainOptions {
    double l2 = 1.0;
    int max_iterations = 200;
    double tolerance = 1e-5;
    int workers = 1;
};

/// Penalized negative log-likelihood of the training set; writes the
/// gradient when `grad` is non-null (must be pre-sized and zeroed).
double crf_objective(const std::vector<double>& weights, int num_features,
                     const std::vector<SequenceFeatures>& chains,
                     const std::vector<LabelSeq>& labels, double l2, int workers,
                     std::vector<double>* grad);

struct CrfTrainResult {
    CrfModel model;
    OptimizeResult optimization;
};

CrfTrainResult train_crf(const std::vector<SequenceFeatures>& chains,
                         const std::vector<LabelSeq>& labels, int num_features,
                         const CrfTrainOptions& options);

}  // namespace eduseg

#endif
