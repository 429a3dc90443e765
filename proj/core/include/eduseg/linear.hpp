#ifndef EDUSEG_LINEAR_HPP
#define EDUSEG_LINEAR_HPP

#include <array>
#include <vector>

#include "eduseg/corpus.hpp"
#include "eduseg/features.hpp"
#include "eduseg/optimize.hpp"

namespace eduseg {

struct BinaryExample {
    FeatureVector x;
    Label y = Label::C;
};

/// Linear scorer with a separate, never-regularized intercept. Positive
/// scores mean B; an exact zero resolves to C.
class LinearModel {
public:
    LinearModel(int num_features, std::vector<double> weights, double bias);
    explicit LinearModel(int num_features);

    int num_features() const { return num_features_; }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

    double score(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const;
    /// Logistic link of the score; calibrated for log-loss training,
    /// a monotone confidence proxy otherwise. Exactly 0.5 at score 0.
    double boundary_probability(const FeatureVector& x) const;

private:
    int num_features_;
    std::vector<double> weights_;
    double bias_;
};

/// Per-class loss multipliers N / (2 * N_y), indexed by label. Both 1
/// when the classes are exactly balanced; a class with no examples gets
/// weight 1 (its multiplier is never applied).
std::array<double, 2> balanced_class_weights(const std::vector<BinaryExample>& examples);

/// Hinge with a quadratic zone of width gamma below margin 1, making the
/// loss differentiable everywhere.
double smoothed_hinge(double margin, double gamma);
double smoothed_hinge_slope(double margin, double gamma);

/// Log loss with an l2 penalty on everything except the final intercept
/// parameter. The parameter vector is the weights followed by the
/// intercept. Gradient written when non-null (pre-sized, zeroed).
double logistic_objective(const std::vector<double>& params, int num_features,
                          const std::vector<BinaryExample>& examples, double l2, int workers,
                          std::vector<double>* grad);

/// 0.5|w|^2 + C * sum of class-weighted smoothed hinges; the intercept
/// is free of the quadratic term.
double svm_objective(const std::vector<double>& params, int num_features,
                     const std::vector<BinaryExample>& examples, double C,
                     const std::array<double, 2>& class_weights, double gamma, int workers,
                     std::vector<double>* grad);

struct BinaryTrainOptions {
    double l2 = 1.0;   // log-loss penalty strength
    double C = 1.0;    // hinge-loss multiplier
    int max_iterations = 200;
    double tolerance = 1e-5;
    int workers = 1;
};

constexpr double kHingeSmoothing = 1e-3;

struct LinearTrainResult {
    LinearModel model;
    OptimizeResult optimization;
    bool single_label = false;  // degenerate training data; caller should warn
};

LinearTrainResult train_logistic(const std::vector<BinaryExample>& examples, int num_features,
                                 const BinaryTrainOptions& options);

/// Class weights are derived from the training labels automatically.
LinearTrainResult train_svm(const std::vector<BinaryExample>& examples, int num_features,
                            const BinaryTrainOptions& options);

}  // namespace eduseg

#endif
