#ifndef EDUSEG_EVAL_HPP
#define EDUSEG_EVAL_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "eduseg/corpus.hpp"

namespace eduseg {

/// Percentages in [0, 100]. A metric whose denominator is empty is
/// reported as 0 with the matching flag raised.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;
};

struct EvalReport {
    ClassMetrics boundary;       // label B
    ClassMetrics inside;         // label C
    ClassMetrics macro;          // unweighted mean over the two classes
    std::size_t positions = 0;   // scored label slots
    std::size_t correct = 0;
    /// counts[gold][predicted]
    std::array<std::array<std::size_t, 2>, 2> counts{{{0, 0}, {0, 0}}};
};

EvalReport evaluate_labels(const std::vector<LabelSeq>& gold, const std::vector<LabelSeq>& predicted);

/// Position-level agreement of two segmenters against the reference:
/// cells[i][j] counts slots where system A is (i == 0 ? right : wrong)
/// and system B is (j == 0 ? right : wrong).
struct Contingency {
    std::array<std::array<std::size_t, 2>, 2> cells{{{0, 0}, {0, 0}}};

    std::size_t total() const;
    std::array<std::size_t, 2> row_totals() const;  // system A right, wrong
    std::array<std::size_t, 2> col_totals() const;  // system B right, wrong
};

Contingency error_contingency(const std::vector<LabelSeq>& gold,
                              const std::vector<LabelSeq>& system_a,
                              const std::vector<LabelSeq>& system_b);

struct WilcoxonResult {
    std::size_t n = 0;       // pairs left after dropping zero differences
    double w_plus = 0.0;     // rank sum of positive differences
    double w_minus = 0.0;
    double p_value = 1.0;    // two-sided
    bool exact = false;      // sign-flip enumeration rather than normal approximation
};

/// Paired two-sided signed-rank test of a versus b. Zero differences are
/// dropped; tied magnitudes share averaged ranks. Exact enumeration up
/// to `exact_limit` informative pairs, the tie-corrected normal
/// approximation with continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t exact_limit = 12);

}  // namespace eduseg

#endif
