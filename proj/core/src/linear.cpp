#include "eduseg/linear.hpp"

#include <algorithm>
#include <cmath>

#include "eduseg/errors.hpp"
#include "eduseg/parallel.hpp"

namespace eduseg {

namespace {

/// log(1 + exp(v)) without overflow.
double log1pexp(double v) {
    if (v > 35.0) return v;
    if (v < -35.0) return std::exp(v);
    return std::log1p(std::exp(v));
}

double sigmoid(double v) {
    if (v >= 0.0) {
        const double e = std::exp(-v);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double sparse_score(const std::vector<double>& params, const FeatureVector& x) {
    double s = 0.0;
    for (const auto& [id, value] : x.entries) s += params[static_cast<std::size_t>(id)] * value;
    return s;
}

void check_examples(const std::vector<double>& params, int num_features,
                    const std::vector<BinaryExample>& examples, const std::vector<double>* grad) {
    if (num_features < 0) throw ArgumentError("negative feature count");
    const std::size_t P = static_cast<std::size_t>(num_features) + 1;
    if (params.size() != P) throw DimensionError("parameter vector size mismatch");
    if (grad && grad->size() != P) throw DimensionError("gradient vector size mismatch");
    for (const BinaryExample& ex : examples)
        for (const auto& [id, value] : ex.x.entries)
            if (id < 0 || id >= num_features)
                throw IndexError("feature id " + std::to_string(id) + " out of range");
}

}  // namespace

LinearModel::LinearModel(int num_features, std::vector<double> weights, double bias)
    : num_features_(num_features), weights_(std::move(weights)), bias_(bias) {
    if (num_features < 0) throw ArgumentError("negative feature count");
    if (weights_.size() != static_cast<std::size_t>(num_features))
        throw DimensionError("weight vector has " + std::to_string(weights_.size()) +
                             " entries, expected " + std::to_string(num_features));
}

LinearModel::LinearModel(int num_features)
    : LinearModel(num_features, std::vector<double>(static_cast<std::size_t>(num_features), 0.0),
                  0.0) {}

double LinearModel::score(const FeatureVector& x) const {
    double s = bias_;
    for (const auto& [id, value] : x.entries) {
        if (id < 0 || id >= num_features_)
            throw IndexError("feature id " + std::to_string(id) + " out of range");
        s += weights_[static_cast<std::size_t>(id)] * value;
    }
    return s;
}

Label LinearModel::predict(const FeatureVector& x) const {
    return score(x) > 0.0 ? Label::B : Label::C;
}

double LinearModel::boundary_probability(const FeatureVector& x) const {
    return sigmoid(score(x));
}

std::array<double, 2> balanced_class_weights(const std::vector<BinaryExample>& examples) {
    std::array<std::size_t, 2> counts{0, 0};
    for (const BinaryExample& ex : examples) ++counts[static_cast<std::size_t>(ex.y)];
    const double total = static_cast<double>(examples.size());
    std::array<double, 2> w{1.0, 1.0};
    for (std::size_t y = 0; y < 2; ++y)
        if (counts[y] > 0) w[y] = total / (2.0 * static_cast<double>(counts[y]));
    return w;
}

namespace {

bool is_single_label(const std::vector<BinaryExample>& examples) {
    std::array<bool, 2> seen{false, false};
    for (const BinaryExample& ex : examples) seen[static_cast<std::size_t>(ex.y)] = true;
    return !(seen[0] && seen[1]);
}

}  // namespace

double smoothed_hinge(double margin, double gamma) {
    if (gamma <= 0.0) throw ArgumentError("smoothing width must be positive");
    if (margin >= 1.0) return 0.0;
    if (margin <= 1.0 - gamma) return 1.0 - margin - gamma / 2.0;
    const double d = 1.0 - margin;
    return d * d / (2.0 * gamma);
}

double smoothed_hinge_slope(double margin, double gamma) {
    if (gamma <= 0.0) throw ArgumentError("smoothing width must be positive");
    if (margin >= 1.0) return 0.0;
    if (margin <= 1.0 - gamma) return -1.0;
    return -(1.0 - margin) / gamma;
}

double logistic_objective(const std::vector<double>& params, int num_features,
                          const std::vector<BinaryExample>& examples, double l2, int workers,
                          std::vector<double>* grad) {
    check_examples(params, num_features, examples, grad);
    if (l2 < 0.0) throw ArgumentError("l2 strength may not be negative");

    const std::size_t P = params.size();
    const int count = static_cast<int>(examples.size());
    workers = std::max(1, workers);
    const int blocks = std::max(1, std::min(workers, count));

    std::vector<double> block_loss(static_cast<std::size_t>(blocks), 0.0);
    std::vector<std::vector<double>> block_grad;
    if (grad)
        block_grad.assign(static_cast<std::size_t>(blocks), std::vector<double>(P, 0.0));

    run_blocks(count, workers, [&](int b, int lo, int hi) {
        double loss = 0.0;
        std::vector<double>* g = grad ? &block_grad[static_cast<std::size_t>(b)] : nullptr;
        for (int e = lo; e < hi; ++e) {
            const BinaryExample& ex = examples[static_cast<std::size_t>(e)];
            const double s = sparse_score(params, ex.x) + params[P - 1];
            const double z = ex.y == Label::B ? 1.0 : -1.0;
            loss += log1pexp(-z * s);
            if (!g) continue;
            const double coef = -z * sigmoid(-z * s);
            for (const auto& [id, value] : ex.x.entries)
                (*g)[static_cast<std::size_t>(id)] += coef * value;
            (*g)[P - 1] += coef;
        }
        block_loss[static_cast<std::size_t>(b)] = loss;
    });

    double total = 0.0;
    for (int b = 0; b < blocks; ++b) total += block_loss[static_cast<std::size_t>(b)];
    if (grad)
        for (int b = 0; b < blocks; ++b)
            for (std::size_t k = 0; k < P; ++k)
                (*grad)[k] += block_grad[static_cast<std::size_t>(b)][k];

    for (std::size_t k = 0; k + 1 < P; ++k) {  // intercept stays unpenalized
        total += 0.5 * l2 * params[k] * params[k];
        if (grad) (*grad)[k] += l2 * params[k];
    }
    return total;
}

double svm_objective(const std::vector<double>& params, int num_features,
                     const std::vector<BinaryExample>& examples, double C,
                     const std::array<double, 2>& class_weights, double gamma, int workers,
                     std::vector<double>* grad) {
    check_examples(params, num_features, examples, grad);
    if (C < 0.0) throw ArgumentError("C may not be negative");
    if (gamma <= 0.0) throw ArgumentError("smoothing width must be positive");

    const std::size_t P = params.size();
    const int count = static_cast<int>(examples.size());
    workers = std::max(1, workers);
    const int blocks = std::max(1, std::min(workers, count));

    std::vector<double> block_loss(static_cast<std::size_t>(blocks), 0.0);
    std::vector<std::vector<double>> block_grad;
    if (grad)
        block_grad.assign(static_cast<std::size_t>(blocks), std::vector<double>(P, 0.0));

    run_blocks(count, workers, [&](int b, int lo, int hi) {
        double loss = 0.0;
        std::vector<double>* g = grad ? &block_grad[static_cast<std::size_t>(b)] : nullptr;
        for (int e = lo; e < hi; ++e) {
            const BinaryExample& ex = examples[static_cast<std::size_t>(e)];
            const double s = sparse_score(params, ex.x) + params[P - 1];
            const double z = ex.y == Label::B ? 1.0 : -1.0;
            const double cw = class_weights[static_cast<std::size_t>(ex.y)];
            loss += cw * smoothed_hinge(z * s, gamma);
            if (!g) continue;
            const double coef = cw * smoothed_hinge_slope(z * s, gamma) * z;
            if (coef == 0.0) continue;
            for (const auto& [id, value] : ex.x.entries)
                (*g)[static_cast<std::size_t>(id)] += coef * value;
            (*g)[P - 1] += coef;
        }
        block_loss[static_cast<std::size_t>(b)] = loss;
    });

    double total = 0.0;
    for (int b = 0; b < blocks; ++b) total += block_loss[static_cast<std::size_t>(b)];
    if (grad)
        for (int b = 0; b < blocks; ++b)
            for (std::size_t k = 0; k < P; ++k)
                (*grad)[k] += block_grad[static_cast<std::size_t>(b)][k];

    total *= C;
    if (grad)
        for (std::size_t k = 0; k < P; ++k) (*grad)[k] *= C;

    for (std::size_t k = 0; k + 1 < P; ++k) {  // intercept stays unpenalized
        total += 0.5 * params[k] * params[k];
        if (grad) (*grad)[k] += params[k];
    }
    return total;
}

namespace {

LinearTrainResult train_binary(const std::vector<BinaryExample>& examples, int num_features,
                               const BinaryTrainOptions& options, const Objective& objective) {
    OptimizeOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.tolerance = options.tolerance;
    const std::size_t P = static_cast<std::size_t>(num_features) + 1;
    OptimizeResult res = minimize_lbfgs(objective, std::vector<double>(P, 0.0), opt);
    std::vector<double> weights(res.x.begin(), res.x.end() - 1);
    LinearModel model(num_features, std::move(weights), res.x.back());
    return {std::move(model), std::move(res)};
}

}  // namespace

LinearTrainResult train_logistic(const std::vector<BinaryExample>& examples, int num_features,
                                 const BinaryTrainOptions& options) {
    const int workers = effective_workers(options.workers);
    LinearTrainResult res =
        train_binary(examples, num_features, options,
                     [&, workers](const std::vector<double>& w, std::vector<double>& g) {
                         return logistic_objective(w, num_features, examples, options.l2,
                                                   workers, &g);
                     });
    res.single_label = is_single_label(examples);
    return res;
}

LinearTrainResult train_svm(const std::vector<BinaryExample>& examples, int num_features,
                            const BinaryTrainOptions& options) {
    const int workers = effective_workers(options.workers);
    const std::array<double, 2> cw = balanced_class_weights(examples);
    LinearTrainResult res =
        train_binary(examples, num_features, options,
                     [&, cw, workers](const std::vector<double>& w, std::vector<double>& g) {
                         return svm_objective(w, num_features, examples, options.C, cw,
                                              kHingeSmoothing, workers, &g);
                     });
    res.single_label = is_single_label(examples);
    return res;
}

}  // namespace eduseg
