#include "eduseg/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "eduseg/errors.hpp"

namespace eduseg {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFormatName = "eduseg-model";
constexpr int kFormatVersion = 1;

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

ordered_json pass_to_json(const PassModel& pass, const FeatureVocabulary& vocab) {
    ordered_json j;
    j["features"] = vocab.names();
    if (pass.framework == Framework::Crf) {
        j["weights"] = pass.crf->weights();
    } else {
        j["weights"] = pass.linear->weights();
        j["bias"] = pass.linear->bias();
    }
    return j;
}

PassModel pass_from_json(const ordered_json& j, Framework framework,
                         FeatureVocabulary& vocab_out) {
    std::vector<std::string> names = j.at("features").get<std::vector<std::string>>();
    vocab_out = FeatureVocabulary::from_names(std::move(names), true);
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    PassModel pass;
    pass.framework = framework;
    if (framework == Framework::Crf) {
        pass.crf.emplace(static_cast<int>(vocab_out.size()), std::move(weights));
    } else {
        pass.linear.emplace(static_cast<int>(vocab_out.size()), std::move(weights),
                            j.at("bias").get<double>());
    }
    return pass;
}

ordered_json config_to_json(const PipelineConfig& c) {
    ordered_json j;
    j["pairing"] = c.pairing;
    j["global_pass"] = c.global_pass;
    j["contextual"] = c.contextual;
    j["l2"] = c.l2;
    j["C"] = c.C;
    j["max_iterations"] = c.max_iterations;
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["min_feature_count"] = c.min_feature_count;
    j["crossfold_pass1"] = c.crossfold_pass1;
    return j;
}

PipelineConfig config_from_json(const ordered_json& j, Framework framework) {
    PipelineConfig c;
    c.framework = framework;
    c.pairing = j.at("pairing").get<bool>();
    c.global_pass = j.at("global_pass").get<bool>();
    c.contextual = j.at("contextual").get<bool>();
    c.l2 = j.at("l2").get<double>();
    c.C = j.at("C").get<double>();
    c.max_iterations = j.at("max_iterations").get<int>();
    c.tolerance = j.at("tolerance").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<int>();
    c.min_feature_count = j.at("min_feature_count").get<int>();
    c.crossfold_pass1 = j.at("crossfold_pass1").get<bool>();
    return c;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string serialize_segmenter(const Segmenter& segmenter) {
    ordered_json j;
    j["format"] = kFormatName;
    j["format_version"] = kFormatVersion;
    j["framework"] = framework_name(segmenter.config().framework);
    j["config"] = config_to_json(segmenter.config());
    j["pass1"] = pass_to_json(segmenter.pass1_model(), segmenter.pass1_vocabulary());
    if (segmenter.has_second_pass())
        j["pass2"] = pass_to_json(segmenter.pass2_model(), segmenter.pass2_vocabulary());
    else
        j["pass2"] = nullptr;
    j["fingerprint"] = "fnv1a64:" + hex64(fnv1a64(j.dump()));
    return j.dump() + "\n";
}

Segmenter deserialize_segmenter(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ModelError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormatName)
            throw ModelError("not a segmenter model file");
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw ModelError("unsupported model format version");

        const std::string stored = j.at("fingerprint").get<std::string>();
        ordered_json body = j;
        body.erase("fingerprint");
        const std::string expected = "fnv1a64:" + hex64(fnv1a64(body.dump()));
        if (stored != expected)
            throw ModelError("model fingerprint mismatch: file is corrupt or was edited");

        const Framework framework = framework_from_name(j.at("framework").get<std::string>());
        const PipelineConfig config = config_from_json(j.at("config"), framework);

        FeatureVocabulary vocab1;
        PassModel pass1 = pass_from_json(j.at("pass1"), framework, vocab1);
        if (j.at("pass2").is_null()) {
            if (config.global_pass)
                throw ModelError("second pass enabled in configuration but missing");
            return Segmenter(config, std::move(vocab1), std::move(pass1));
        }
        if (!config.global_pass)
            throw ModelError("second pass present but disabled in configuration");
        FeatureVocabulary vocab2;
        PassModel pass2 = pass_from_json(j.at("pass2"), framework, vocab2);
        return Segmenter(config, std::move(vocab1), std::move(pass1), std::move(vocab2),
                         std::move(pass2));
    } catch (const ModelError&) {
        throw;
    } catch (const std::exception& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
}

void save_segmenter(const Segmenter& segmenter, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << serialize_segmenter(segmenter);
    if (!out) throw Error("failed writing " + path);
}

Segmenter load_segmenter(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_segmenter(buf.str());
}

}  // namespace eduseg
