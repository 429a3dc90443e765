#include "eduseg/eval.hpp"

#include <algorithm>
#include <cmath>

#include "eduseg/errors.hpp"

namespace eduseg {

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
    ClassMetrics m;
    if (tp + fp == 0)
        m.precision_undefined = true;
    else
        m.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn == 0)
        m.recall_undefined = true;
    else
        m.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

EvalReport evaluate_labels(const std::vector<LabelSeq>& gold,
                           const std::vector<LabelSeq>& predicted) {
    if (gold.size() != predicted.size())
        throw AlignmentError("gold and predicted corpus sizes differ");
    EvalReport r;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        if (gold[s].size() != predicted[s].size())
            throw AlignmentError("gold and predicted lengths differ in sentence " +
                                 std::to_string(s));
        for (std::size_t i = 0; i < gold[s].size(); ++i) {
            const auto g = static_cast<std::size_t>(gold[s][i]);
            const auto p = static_cast<std::size_t>(predicted[s][i]);
            ++r.counts[g][p];
        }
    }
    r.positions = r.counts[0][0] + r.counts[0][1] + r.counts[1][0] + r.counts[1][1];
    r.correct = r.counts[0][0] + r.counts[1][1];
    r.boundary = class_metrics(r.counts[1][1], r.counts[0][1], r.counts[1][0]);
    r.inside = class_metrics(r.counts[0][0], r.counts[1][0], r.counts[0][1]);
    r.macro.precision = (r.boundary.precision + r.inside.precision) / 2.0;
    r.macro.recall = (r.boundary.recall + r.inside.recall) / 2.0;
    r.macro.f1 = (r.boundary.f1 + r.inside.f1) / 2.0;
    return r;
}

std::size_t Contingency::total() const {
    return cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1];
}

std::array<std::size_t, 2> Contingency::row_totals() const {
    return {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
}

std::array<std::size_t, 2> Contingency::col_totals() const {
    return {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};
}

Contingency error_contingency(const std::vector<LabelSeq>& gold,
                              const std::vector<LabelSeq>& system_a,
                              const std::vector<LabelSeq>& system_b) {
    if (gold.size() != system_a.size() || gold.size() != system_b.size())
        throw AlignmentError("corpus sizes differ");
    Contingency c;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        if (gold[s].size() != system_a[s].size() || gold[s].size() != system_b[s].size())
            throw AlignmentError("lengths differ in sentence " + std::to_string(s));
        for (std::size_t i = 0; i < gold[s].size(); ++i) {
            const std::size_t ra = system_a[s][i] == gold[s][i] ? 0 : 1;
            const std::size_t rb = system_b[s][i] == gold[s][i] ? 0 : 1;
            ++c.cells[ra][rb];
        }
    }
    return c;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t exact_limit) {
    if (a.size() != b.size()) throw DimensionError("paired samples differ in length");

    struct Diff {
        double mag;
        bool positive;
    };
    std::vector<Diff> diffs;
    diffs.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        if (d != 0.0) diffs.push_back({std::fabs(d), d > 0.0});
    }

    WilcoxonResult res;
    res.n = diffs.size();
    if (diffs.empty()) return res;

    std::sort(diffs.begin(), diffs.end(),
              [](const Diff& x, const Diff& y) { return x.mag < y.mag; });

    const std::size_t n = diffs.size();
    std::vector<double> ranks(n);
    double tie_correction = 0.0;
    for (std::size_t k = 0; k < n;) {
        std::size_t j = k;
        while (j < n && diffs[j].mag == diffs[k].mag) ++j;
        const double avg = (static_cast<double>(k + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = k; t < j; ++t) ranks[t] = avg;
        const double ties = static_cast<double>(j - k);
        tie_correction += ties * ties * ties - ties;
        k = j;
    }

    for (std::size_t k = 0; k < n; ++k)
        (diffs[k].positive ? res.w_plus : res.w_minus) += ranks[k];

    if (n <= exact_limit) {
        // Distribution of W+ under sign flips, by enumeration.
        res.exact = true;
        const std::size_t assignments = static_cast<std::size_t>(1) << n;
        std::size_t le = 0, ge = 0;
        const double eps = 1e-9;
        for (std::size_t mask = 0; mask < assignments; ++mask) {
            double w = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (mask & (static_cast<std::size_t>(1) << k)) w += ranks[k];
            if (w <= res.w_plus + eps) ++le;
            if (w >= res.w_plus - eps) ++ge;
        }
        const double denom = static_cast<double>(assignments);
        const double tail =
            std::min(static_cast<double>(le), static_cast<double>(ge)) / denom;
        res.p_value = std::min(1.0, 2.0 * tail);
        return res;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_correction / 48.0;
    if (var <= 0.0) {  // all magnitudes tied and n tiny; degenerate
        res.p_value = 1.0;
        return res;
    }
    // Continuity correction pulls the statistic half a rank toward the mean.
    double delta = std::fabs(res.w_plus - mean) - 0.5;
    if (delta < 0.0) delta = 0.0;
    const double z = delta / std::sqrt(var);
    res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
    return res;
}

}  // namespace eduseg
