// Microbenchmarks for the inference and feature-extraction hot paths.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "eduseg/corpus.hpp"
#include "eduseg/crf.hpp"
#include "eduseg/features.hpp"

namespace {

using namespace eduseg;

SequenceFeatures random_chain(std::mt19937_64& rng, int length, int num_features,
                              int active_per_position) {
    SequenceFeatures chain(static_cast<std::size_t>(length));
    std::uniform_int_distribution<int> pick(0, num_features - 1);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    for (auto& vec : chain) {
        std::vector<int> ids;
        while (static_cast<int>(ids.size()) < active_per_position) {
            const int id = pick(rng);
            bool seen = false;
            for (int existing : ids) seen = seen || existing == id;
            if (!seen) ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        for (int id : ids) vec.entries.emplace_back(id, value(rng));
    }
    return chain;
}

Sentence sample_sentence(int n_tokens) {
    static const char* tags[] = {"DT", "NN", "VB", "IN", "JJ", "RB"};
    std::string expr = "(S";
    for (int t = 0; t < n_tokens; ++t)
        expr += " (" + std::string(tags[t % 6]) + " w" + std::to_string(t % 17) + ")";
    expr += ")";
    return sentence_from_tree(parse_bracketed_tree(expr), "bench", 1);
}

void BM_forward_backward(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const int F = static_cast<int>(state.range(0));
    const SequenceFeatures chain = random_chain(rng, 30, F, 40);
    std::vector<double> w(CrfModel::parameter_count(F));
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (double& v : w) v = value(rng);
    const CrfModel model(F, w);
    for (auto _ : state) benchmark::DoNotOptimize(model.marginals(chain));
}
BENCHMARK(BM_forward_backward)->Arg(1000)->Arg(100000);

void BM_viterbi(benchmark::State& state) {
    std::mt19937_64 rng(8);
    const int F = static_cast<int>(state.range(0));
    const SequenceFeatures chain = random_chain(rng, 30, F, 40);
    std::vector<double> w(CrfModel::parameter_count(F));
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (double& v : w) v = value(rng);
    const CrfModel model(F, w);
    for (auto _ : state) benchmark::DoNotOptimize(model.decode(chain));
}
BENCHMARK(BM_viterbi)->Arg(1000)->Arg(100000);

void BM_extract_features(benchmark::State& state) {
    const Sentence sentence = sample_sentence(static_cast<int>(state.range(0)));
    FeatureConfig config;  // pairing + context, no second-pass features
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(sentence, config));
}
BENCHMARK(BM_extract_features)->Arg(10)->Arg(40);

void BM_extract_features_global(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Sentence sentence = sample_sentence(n);
    FeatureConfig config;
    config.global = true;
    const EduSpans initial = {{1, n / 2}, {n / 2 + 1, n}};
    for (auto _ : state)
        benchmark::DoNotOptimize(extract_features(sentence, config, initial));
}
BENCHMARK(BM_extract_features_global)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
