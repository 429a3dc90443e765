#include "eduseg/crf.hpp"

#include <cmath>
#include <limits>

#include "eduseg/errors.hpp"
#include "eduseg/parallel.hpp"

namespace eduseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp((a > b ? b : a) - m));
}

}  // namespace

std::size_t CrfModel::parameter_count(int num_features) {
    return static_cast<std::size_t>(num_features) * 2 + 6;
}

CrfModel::CrfModel(int num_features, std::vector<double> weights)
    : num_features_(num_features), weights_(std::move(weights)) {
    if (num_features < 0) throw ArgumentError("negative feature count");
    if (weights_.size() != parameter_count(num_features))
        throw DimensionError("weight vector has " + std::to_string(weights_.size()) +
                             " entries, expected " +
                             std::to_string(parameter_count(num_features)));
}

CrfModel::CrfModel(int num_features)
    : CrfModel(num_features, std::vector<double>(parameter_count(num_features), 0.0)) {}

double CrfModel::emission(int feature, Label y) const {
    if (feature < 0 || feature >= num_features_)
        throw IndexError("feature id " + std::to_string(feature) + " out of range");
    return weights_[static_cast<std::size_t>(feature) * 2 + static_cast<std::size_t>(y)];
}

double CrfModel::transition(Label prev, Label next) const {
    return weights_[static_cast<std::size_t>(num_features_) * 2 +
                    static_cast<std::size_t>(prev) * 2 + static_cast<std::size_t>(next)];
}

double CrfModel::begin(Label y) const {
    return weights_[static_cast<std::size_t>(num_features_) * 2 + 4 + static_cast<std::size_t>(y)];
}

double CrfModel::node_score(const FeatureVector& x, int y) const {
    double s = 0.0;
    for (const auto& [id, value] : x.entries)
        s += weights_[static_cast<std::size_t>(id) * 2 + static_cast<std::size_t>(y)] * value;
    return s;
}

void CrfModel::check_chain(const SequenceFeatures& chain) const {
    for (const FeatureVector& x : chain)
        for (const auto& [id, value] : x.entries)
            if (id < 0 || id >= num_features_)
                throw DimensionError("feature id " + std::to_string(id) +
                                     " outside the model's " + std::to_string(num_features_) +
                                     " features");
}

double CrfModel::sequence_score(const SequenceFeatures& chain, const LabelSeq& labels) const {
    if (chain.size() != labels.size())
        throw DimensionError("chain and labeling lengths differ");
    check_chain(chain);
    if (chain.empty()) return 0.0;
    double s = begin(labels[0]) + node_score(chain[0], static_cast<int>(labels[0]));
    for (std::size_t i = 1; i < chain.size(); ++i)
        s += transition(labels[i - 1], labels[i]) +
             node_score(chain[i], static_cast<int>(labels[i]));
    return s;
}

CrfModel::Marginals CrfModel::marginals(const SequenceFeatures& chain) const {
    check_chain(chain);
    Marginals m;
    const std::size_t L = chain.size();
    if (L == 0) return m;

    std::vector<std::array<double, 2>> node(L);
    for (std::size_t i = 0; i < L; ++i)
        node[i] = {node_score(chain[i], 0), node_score(chain[i], 1)};

    const double t00 = transition(Label::C, Label::C);
    const double t01 = transition(Label::C, Label::B);
    const double t10 = transition(Label::B, Label::C);
    const double t11 = transition(Label::B, Label::B);

    std::vector<std::array<double, 2>> alpha(L), beta(L);
    alpha[0] = {begin(Label::C) + node[0][0], begin(Label::B) + node[0][1]};
    for (std::size_t i = 1; i < L; ++i) {
        alpha[i][0] = lse2(alpha[i - 1][0] + t00, alpha[i - 1][1] + t10) + node[i][0];
        alpha[i][1] = lse2(alpha[i - 1][0] + t01, alpha[i - 1][1] + t11) + node[i][1];
    }
    beta[L - 1] = {0.0, 0.0};
    for (std::size_t i = L - 1; i-- > 0;) {
        beta[i][0] = lse2(t00 + node[i + 1][0] + beta[i + 1][0],
                          t01 + node[i + 1][1] + beta[i + 1][1]);
        beta[i][1] = lse2(t10 + node[i + 1][0] + beta[i + 1][0],
                          t11 + node[i + 1][1] + beta[i + 1][1]);
    }

    m.log_z = lse2(alpha[L - 1][0], alpha[L - 1][1]);
    m.node.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        m.node[i][0] = std::exp(alpha[i][0] + beta[i][0] - m.log_z);
        m.node[i][1] = std::exp(alpha[i][1] + beta[i][1] - m.log_z);
    }
    if (L > 1) {
        m.edge.resize(L - 1);
        const double trans[4] = {t00, t01, t10, t11};
        for (std::size_t i = 0; i + 1 < L; ++i)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    m.edge[i][static_cast<std::size_t>(a * 2 + b)] =
                        std::exp(alpha[i][static_cast<std::size_t>(a)] + trans[a * 2 + b] +
                                 node[i + 1][static_cast<std::size_t>(b)] +
                                 beta[i + 1][static_cast<std::size_t>(b)] - m.log_z);
    }
    return m;
}

double CrfModel::log_partition(const SequenceFeatures& chain) const {
    check_chain(chain);
    const std::size_t L = chain.size();
    if (L == 0) return 0.0;
    double a0 = begin(Label::C) + node_score(chain[0], 0);
    double a1 = begin(Label::B) + node_score(chain[0], 1);
    const double t00 = transition(Label::C, Label::C);
    const double t01 = transition(Label::C, Label::B);
    const double t10 = transition(Label::B, Label::C);
    const double t11 = transition(Label::B, Label::B);
    for (std::size_t i = 1; i < L; ++i) {
        const double n0 = node_score(chain[i], 0);
        const double n1 = node_score(chain[i], 1);
        const double b0 = lse2(a0 + t00, a1 + t10) + n0;
        const double b1 = lse2(a0 + t01, a1 + t11) + n1;
        a0 = b0;
        a1 = b1;
    }
    return lse2(a0, a1);
}

LabelSeq CrfModel::decode(const SequenceFeatures& chain) const {
    check_chain(chain);
    const std::size_t L = chain.size();
    LabelSeq out;
    if (L == 0) return out;

    // delta[i][y]: best score of the suffix starting at i given label y
    // at i, excluding everything before i. Selecting labels left to right
    // by exact score equality then yields, among all maximizers, the
    // lexicographically smallest sequence under C < B.
    std::vector<std::array<double, 2>> node(L), delta(L);
    for (std::size_t i = 0; i < L; ++i)
        node[i] = {node_score(chain[i], 0), node_score(chain[i], 1)};
    const double trans[4] = {transition(Label::C, Label::C), transition(Label::C, Label::B),
                             transition(Label::B, Label::C), transition(Label::B, Label::B)};

    delta[L - 1] = node[L - 1];
    for (std::size_t i = L - 1; i-- > 0;)
        for (int y = 0; y < 2; ++y)
            delta[i][static_cast<std::size_t>(y)] =
                node[i][static_cast<std::size_t>(y)] +
                std::max(trans[y * 2 + 0] + delta[i + 1][0], trans[y * 2 + 1] + delta[i + 1][1]);

    out.resize(L);
    const double s0 = begin(Label::C) + delta[0][0];
    const double s1 = begin(Label::B) + delta[0][1];
    out[0] = s0 >= s1 ? Label::C : Label::B;
    for (std::size_t i = 1; i < L; ++i) {
        const int prev = static_cast<int>(out[i - 1]);
        const double c0 = trans[prev * 2 + 0] + delta[i][0];
        const double c1 = trans[prev * 2 + 1] + delta[i][1];
        out[i] = c0 >= c1 ? Label::C : Label::B;
    }
    return out;
}

double crf_objective(const std::vector<double>& weights, int num_features,
                     const std::vector<SequenceFeatures>& chains,
                     const std::vector<LabelSeq>& labels, double l2, int workers,
                     std::vector<double>* grad) {
    if (chains.size() != labels.size())
        throw DimensionError("chain and label set sizes differ");
    if (l2 < 0.0) throw ArgumentError("l2 strength may not be negative");
    const std::size_t P = CrfModel::parameter_count(num_features);
    if (weights.size() != P) throw DimensionError("weight vector size mismatch");
    if (grad && grad->size() != P) throw DimensionError("gradient vector size mismatch");

    // All validation happens before the parallel region.
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (chains[c].size() != labels[c].size())
            throw DimensionError("chain and labeling lengths differ");
        for (const FeatureVector& x : chains[c])
            for (const auto& [id, value] : x.entries)
                if (id < 0 || id >= num_features)
                    throw DimensionError("feature id " + std::to_string(id) +
                                         " outside the model's " +
                                         std::to_string(num_features) + " features");
    }

    const CrfModel model(num_features, weights);
    const int count = static_cast<int>(chains.size());
    workers = std::max(1, workers);
    const int blocks = std::max(1, std::min(workers, count));

    std::vector<double> block_nll(static_cast<std::size_t>(blocks), 0.0);
    std::vector<std::vector<double>> block_grad;
    if (grad)
        block_grad.assign(static_cast<std::size_t>(blocks), std::vector<double>(P, 0.0));

    run_blocks(count, workers, [&](int b, int lo, int hi) {
        double nll = 0.0;
        std::vector<double>* g = grad ? &block_grad[static_cast<std::size_t>(b)] : nullptr;
        const std::size_t F2 = static_cast<std::size_t>(num_features) * 2;
        for (int c = lo; c < hi; ++c) {
            const SequenceFeatures& chain = chains[static_cast<std::size_t>(c)];
            const LabelSeq& gold = labels[static_cast<std::size_t>(c)];
            if (chain.empty()) continue;
            const CrfModel::Marginals m = model.marginals(chain);
            nll += m.log_z - model.sequence_score(chain, gold);
            if (!g) continue;
            std::vector<double>& gr = *g;
            for (std::size_t i = 0; i < chain.size(); ++i) {
                const int gy = static_cast<int>(gold[i]);
                for (const auto& [id, value] : chain[i].entries) {
                    const std::size_t base = static_cast<std::size_t>(id) * 2;
                    gr[base + 0] += m.node[i][0] * value;
                    gr[base + 1] += m.node[i][1] * value;
                    gr[base + static_cast<std::size_t>(gy)] -= value;
                }
            }
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
                for (int k = 0; k < 4; ++k)
                    gr[F2 + static_cast<std::size_t>(k)] +=
                        m.edge[i][static_cast<std::size_t>(k)];
                gr[F2 + static_cast<std::size_t>(static_cast<int>(gold[i]) * 2 +
                                                 static_cast<int>(gold[i + 1]))] -= 1.0;
            }
            gr[F2 + 4] += m.node[0][0];
            gr[F2 + 5] += m.node[0][1];
            gr[F2 + 4 + static_cast<std::size_t>(gold[0])] -= 1.0;
        }
        block_nll[static_cast<std::size_t>(b)] = nll;
    });

    double total = 0.0;
    for (int b = 0; b < blocks; ++b) total += block_nll[static_cast<std::size_t>(b)];
    if (grad)
        for (int b = 0; b < blocks; ++b)
            for (std::size_t k = 0; k < P; ++k) (*grad)[k] += block_grad[static_cast<std::size_t>(b)][k];

    for (std::size_t k = 0; k < P; ++k) {
        total += 0.5 * l2 * weights[k] * weights[k];
        if (grad) (*grad)[k] += l2 * weights[k];
    }
    return total;
}

CrfTrainResult train_crf(const std::vector<SequenceFeatures>& chains,
                         const std::vector<LabelSeq>& labels, int num_features,
                         const CrfTrainOptions& options) {
    const std::size_t P = CrfModel::parameter_count(num_features);
    OptimizeOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.tolerance = options.tolerance;
    const int workers = effective_workers(options.workers);
    OptimizeResult res = minimize_lbfgs(
        [&](const std::vector<double>& w, std::vector<double>& g) {
            return crf_objective(w, num_features, chains, labels, options.l2, workers, &g);
        },
        std::vector<double>(P, 0.0), opt);
    CrfModel model(num_features, res.x);
    return {std::move(model), std::move(res)};
}

}  // namespace eduseg
