#include "eduseg/pipeline.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "eduseg/errors.hpp"
#include "eduseg/parallel.hpp"

namespace eduseg {

namespace {

constexpr int kCrossFolds = 10;

FeatureConfig pass1_feature_config(const PipelineConfig& c) {
    return {c.pairing, false, c.contextual};
}

FeatureConfig pass2_feature_config(const PipelineConfig& c) {
    return {c.pairing, true, c.contextual};
}

std::vector<FeatureList> extract_pass(const Sentence& sentence, const FeatureConfig& fc,
                                      const EduSpans* initial) {
    return fc.global ? extract_features(sentence, fc, *initial)
                     : extract_features(sentence, fc);
}

/// Keeps features that fire at least min_count times, ids in order of
/// first occurrence. The result is frozen.
FeatureVocabulary build_vocabulary(const std::vector<std::vector<FeatureList>>& corpus_lists,
                                   int min_count) {
    if (min_count < 1) throw ArgumentError("min_feature_count must be at least 1");
    std::unordered_map<std::string, int> counts;
    std::vector<std::string> order;
    for (const auto& sentence_lists : corpus_lists)
        for (const FeatureList& fl : sentence_lists)
            for (const Feature& f : fl) {
                auto [it, inserted] = counts.emplace(f.name, 1);
                if (inserted)
                    order.push_back(f.name);
                else
                    ++it->second;
            }
    FeatureVocabulary vocab;
    for (const std::string& name : order)
        if (counts[name] >= min_count) vocab.intern(name);
    vocab.freeze();
    return vocab;
}

std::vector<SequenceFeatures> index_corpus(const std::vector<std::vector<FeatureList>>& lists,
                                           const FeatureVocabulary& vocab) {
    std::vector<SequenceFeatures> chains;
    chains.reserve(lists.size());
    for (const auto& sentence_lists : lists) {
        SequenceFeatures chain;
        chain.reserve(sentence_lists.size());
        for (const FeatureList& fl : sentence_lists) chain.push_back(index_features(fl, vocab));
        chains.push_back(std::move(chain));
    }
    return chains;
}

PassModel train_pass(const std::vector<SequenceFeatures>& chains,
                     const std::vector<LabelSeq>& golds, int num_features,
                     const PipelineConfig& config, PassDiagnostics* diag) {
    PassModel pass;
    pass.framework = config.framework;
    if (config.framework == Framework::Crf) {
        CrfTrainOptions opt;
        opt.l2 = config.l2;
        opt.max_iterations = config.max_iterations;
        opt.tolerance = config.tolerance;
        opt.workers = config.workers;
        CrfTrainResult res = train_crf(chains, golds, num_features, opt);
        if (diag) {
            diag->iterations = res.optimization.iterations;
            diag->objective = res.optimization.objective;
            diag->converged = res.optimization.converged;
        }
        pass.crf.emplace(std::move(res.model));
        return pass;
    }
    std::vector<BinaryExample> examples;
    for (std::size_t s = 0; s < chains.size(); ++s)
        for (std::size_t i = 0; i < chains[s].size(); ++i)
            examples.push_back({chains[s][i], golds[s][i]});
    BinaryTrainOptions opt;
    opt.l2 = config.l2;
    opt.C = config.C;
    opt.max_iterations = config.max_iterations;
    opt.tolerance = config.tolerance;
    opt.workers = config.workers;
    LinearTrainResult res = config.framework == Framework::LogisticRegression
                                ? train_logistic(examples, num_features, opt)
                                : train_svm(examples, num_features, opt);
    if (diag) {
        diag->iterations = res.optimization.iterations;
        diag->objective = res.optimization.objective;
        diag->converged = res.optimization.converged;
        diag->single_label = res.single_label;
    }
    pass.linear.emplace(std::move(res.model));
    return pass;
}

/// Deterministic Fisher-Yates; std::shuffle permutations vary between
/// standard libraries, this one does not.
void deterministic_shuffle(std::vector<int>& v, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
}

std::vector<LabelSeq> decode_chains(const PassModel& pass,
                                    const std::vector<SequenceFeatures>& chains) {
    std::vector<LabelSeq> out(chains.size());
    for (std::size_t s = 0; s < chains.size(); ++s) out[s] = pass.decode(chains[s]);
    return out;
}

/// First-pass output for second-pass training: the model's own
/// predictions on its training sentences, or jackknifed predictions
/// where each sentence is decoded by a model that never saw it.
std::vector<LabelSeq> pass1_training_predictions(
    const Corpus& corpus, const std::vector<std::vector<FeatureList>>& lists1,
    const std::vector<SequenceFeatures>& chains1, const std::vector<LabelSeq>& golds,
    const PassModel& pass1, const PipelineConfig& config) {
    if (!config.crossfold_pass1) return decode_chains(pass1, chains1);

    const int n = static_cast<int>(corpus.size());
    if (n < 2) throw ArgumentError("cross-fold first-pass output needs at least 2 sentences");
    const int folds = std::min(kCrossFolds, n);

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    deterministic_shuffle(order, config.seed);

    std::vector<int> fold_of(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int f = static_cast<int>(static_cast<long long>(i) * folds / n);
        fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = f;
    }

    std::vector<LabelSeq> out(corpus.size());
    for (int f = 0; f < folds; ++f) {
        std::vector<std::vector<FeatureList>> train_lists;
        std::vector<LabelSeq> train_golds;
        for (int i = 0; i < n; ++i)
            if (fold_of[static_cast<std::size_t>(i)] != f) {
                train_lists.push_back(lists1[static_cast<std::size_t>(i)]);
                train_golds.push_back(golds[static_cast<std::size_t>(i)]);
            }
        FeatureVocabulary vocab = build_vocabulary(train_lists, config.min_feature_count);
        const std::vector<SequenceFeatures> train_chains = index_corpus(train_lists, vocab);
        const PassModel fold_model = train_pass(train_chains, train_golds,
                                                static_cast<int>(vocab.size()), config, nullptr);
        for (int i = 0; i < n; ++i)
            if (fold_of[static_cast<std::size_t>(i)] == f) {
                SequenceFeatures chain;
                for (const FeatureList& fl : lists1[static_cast<std::size_t>(i)])
                    chain.push_back(index_features(fl, vocab));
                out[static_cast<std::size_t>(i)] = fold_model.decode(chain);
            }
    }
    return out;
}

}  // namespace

std::string framework_name(Framework f) {
    switch (f) {
        case Framework::Crf: return "crf";
        case Framework::LogisticRegression: return "lr";
        case Framework::Svm: return "svm";
    }
    throw ArgumentError("unknown framework");
}

Framework framework_from_name(const std::string& name) {
    if (name == "crf") return Framework::Crf;
    if (name == "lr") return Framework::LogisticRegression;
    if (name == "svm") return Framework::Svm;
    throw ArgumentError("unknown framework: " + name);
}

LabelSeq PassModel::decode(const SequenceFeatures& chain) const {
    if (framework == Framework::Crf) {
        if (!crf) throw StateError("chain model missing");
        return crf->decode(chain);
    }
    if (!linear) throw StateError("classifier missing");
    LabelSeq out;
    out.reserve(chain.size());
    for (const FeatureVector& x : chain) out.push_back(linear->predict(x));
    return out;
}

Segmenter::Segmenter(PipelineConfig config, FeatureVocabulary vocab1, PassModel pass1)
    : config_(std::move(config)), vocab1_(std::move(vocab1)), pass1_(std::move(pass1)) {
    if (config_.global_pass) throw StateError("second pass expected but not provided");
}

Segmenter::Segmenter(PipelineConfig config, FeatureVocabulary vocab1, PassModel pass1,
                     FeatureVocabulary vocab2, PassModel pass2)
    : config_(std::move(config)),
      vocab1_(std::move(vocab1)),
      pass1_(std::move(pass1)),
      vocab2_(std::move(vocab2)),
      pass2_(std::move(pass2)) {
    if (!config_.global_pass) throw StateError("second pass provided but disabled");
}

const FeatureVocabulary& Segmenter::pass2_vocabulary() const {
    if (!vocab2_) throw StateError("no second pass");
    return *vocab2_;
}

const PassModel& Segmenter::pass2_model() const {
    if (!pass2_) throw StateError("no second pass");
    return *pass2_;
}

LabelSeq Segmenter::pass1_labels(const Sentence& sentence) const {
    const std::vector<FeatureList> lists =
        extract_pass(sentence, pass1_feature_config(config_), nullptr);
    SequenceFeatures chain;
    chain.reserve(lists.size());
    for (const FeatureList& fl : lists) chain.push_back(index_features(fl, vocab1_));
    return pass1_.decode(chain);
}

EduSpans Segmenter::segment(const Sentence& sentence) const {
    const LabelSeq labels1 = pass1_labels(sentence);
    EduSpans spans = labels_to_spans(labels1, sentence.size());
    if (!pass2_) return spans;
    const std::vector<FeatureList> lists =
        extract_pass(sentence, pass2_feature_config(config_), &spans);
    SequenceFeatures chain;
    chain.reserve(lists.size());
    for (const FeatureList& fl : lists) chain.push_back(index_features(fl, *vocab2_));
    return labels_to_spans(pass2_->decode(chain), sentence.size());
}

std::vector<EduSpans> Segmenter::segment_corpus(const std::vector<Sentence>& sentences,
                                                int workers) const {
    std::vector<EduSpans> out(sentences.size());
    run_blocks(static_cast<int>(sentences.size()), effective_workers(workers),
               [&](int, int lo, int hi) {
                   for (int s = lo; s < hi; ++s)
                       out[static_cast<std::size_t>(s)] =
                           segment(sentences[static_cast<std::size_t>(s)]);
               });
    return out;
}

Segmenter train_segmenter(const Corpus& corpus, const PipelineConfig& config,
                          TrainDiagnostics* diagnostics) {
    if (corpus.empty()) throw ArgumentError("training corpus is empty");

    std::vector<LabelSeq> golds;
    golds.reserve(corpus.size());
    for (const AnnotatedSentence& as : corpus) {
        validate_spans(as.gold, as.sentence.size());
        golds.push_back(spans_to_labels(as.gold, as.sentence.size()));
    }

    const FeatureConfig fc1 = pass1_feature_config(config);
    std::vector<std::vector<FeatureList>> lists1;
    lists1.reserve(corpus.size());
    for (const AnnotatedSentence& as : corpus)
        lists1.push_back(extract_pass(as.sentence, fc1, nullptr));

    FeatureVocabulary vocab1 = build_vocabulary(lists1, config.min_feature_count);
    const std::vector<SequenceFeatures> chains1 = index_corpus(lists1, vocab1);

    TrainDiagnostics local;
    TrainDiagnostics& diag = diagnostics ? *diagnostics : local;
    diag.pass1 = {};
    diag.pass2.reset();
    diag.pass1.vocabulary = vocab1.size();

    PassModel pass1 = train_pass(chains1, golds, static_cast<int>(vocab1.size()), config,
                                 &diag.pass1);

    if (!config.global_pass)
        return Segmenter(config, std::move(vocab1), std::move(pass1));

    const std::vector<LabelSeq> pred1 =
        pass1_training_predictions(corpus, lists1, chains1, golds, pass1, config);

    const FeatureConfig fc2 = pass2_feature_config(config);
    std::vector<std::vector<FeatureList>> lists2;
    lists2.reserve(corpus.size());
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        const EduSpans initial =
            labels_to_spans(pred1[s], corpus[s].sentence.size());
        lists2.push_back(extract_pass(corpus[s].sentence, fc2, &initial));
    }

    FeatureVocabulary vocab2 = build_vocabulary(lists2, config.min_feature_count);
    const std::vector<SequenceFeatures> chains2 = index_corpus(lists2, vocab2);

    diag.pass2.emplace();
    diag.pass2->vocabulary = vocab2.size();
    PassModel pass2 = train_pass(chains2, golds, static_cast<int>(vocab2.size()), config,
                                 &*diag.pass2);

    return Segmenter(config, std::move(vocab1), std::move(pass1), std::move(vocab2),
                     std::move(pass2));
}

EvalReport evaluate_segmenter(const Segmenter& segmenter, const Corpus& corpus, int workers) {
    std::vector<Sentence> sentences;
    sentences.reserve(corpus.size());
    for (const AnnotatedSentence& as : corpus) sentences.push_back(as.sentence);
    const std::vector<EduSpans> predicted = segmenter.segment_corpus(sentences, workers);

    std::vector<LabelSeq> gold, pred;
    gold.reserve(corpus.size());
    pred.reserve(corpus.size());
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        gold.push_back(spans_to_labels(corpus[s].gold, corpus[s].sentence.size()));
        pred.push_back(spans_to_labels(predicted[s], corpus[s].sentence.size()));
    }
    return evaluate_labels(gold, pred);
}

const std::vector<AblationVariant>& ablation_variants() {
    static const std::vector<AblationVariant> variants = {
        {"full", true, true},
        {"-p", false, true},
        {"-g", true, false},
        {"-pg", false, false},
    };
    return variants;
}

AblationGrid run_ablation_grid(const Corpus& train, const Corpus& test,
                               const PipelineConfig& base) {
    {
        std::unordered_map<std::string, bool> train_docs;
        for (const AnnotatedSentence& as : train) train_docs.emplace(as.sentence.doc_id, true);
        for (const AnnotatedSentence& as : test)
            if (train_docs.count(as.sentence.doc_id))
                throw ValidationError("document " + as.sentence.doc_id +
                                      " appears in both train and test");
    }

    AblationGrid grid;
    grid.gold.reserve(test.size());
    for (const AnnotatedSentence& as : test) {
        validate_spans(as.gold, as.sentence.size());
        grid.gold.push_back(spans_to_labels(as.gold, as.sentence.size()));
    }

    // document grouping, in order of first appearance
    std::vector<std::vector<std::size_t>> doc_sentences;
    {
        std::unordered_map<std::string, std::size_t> doc_index;
        for (std::size_t s = 0; s < test.size(); ++s) {
            auto [it, inserted] =
                doc_index.emplace(test[s].sentence.doc_id, doc_sentences.size());
            if (inserted) {
                doc_sentences.emplace_back();
                grid.document_ids.push_back(test[s].sentence.doc_id);
            }
            doc_sentences[it->second].push_back(s);
        }
    }

    std::vector<Sentence> sentences;
    sentences.reserve(test.size());
    for (const AnnotatedSentence& as : test) sentences.push_back(as.sentence);

    static const Framework frameworks[] = {Framework::Crf, Framework::LogisticRegression,
                                           Framework::Svm};
    for (const AblationVariant& variant : ablation_variants()) {
        for (const Framework fw : frameworks) {
            PipelineConfig cfg = base;
            cfg.framework = fw;
            cfg.pairing = variant.pairing;
            cfg.global_pass = variant.global_pass;

            GridCell cell;
            cell.framework = fw;
            cell.variant = variant.name;
            const Segmenter seg = train_segmenter(train, cfg, &cell.diagnostics);
            const std::vector<EduSpans> spans = seg.segment_corpus(sentences, cfg.workers);

            cell.predictions.reserve(test.size());
            for (std::size_t s = 0; s < test.size(); ++s)
                cell.predictions.push_back(spans_to_labels(spans[s], test[s].sentence.size()));
            cell.report = evaluate_labels(grid.gold, cell.predictions);

            cell.document_boundary_f1.reserve(doc_sentences.size());
            for (const auto& members : doc_sentences) {
                std::vector<LabelSeq> dg, dp;
                dg.reserve(members.size());
                dp.reserve(members.size());
                for (std::size_t s : members) {
                    dg.push_back(grid.gold[s]);
                    dp.push_back(cell.predictions[s]);
                }
                cell.document_boundary_f1.push_back(evaluate_labels(dg, dp).boundary.f1);
            }
            grid.cells.push_back(std::move(cell));
        }
    }
    return grid;
}

}  // namespace eduseg
