#ifndef EDUSEG_OPTIMIZE_HPP
#define EDUSEG_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace eduseg {

struct OptimizeOptions {
    int max_iterations = 200;
    double tolerance = 1e-5;  // on |grad| / max(1, |x|)
    int history = 10;
};

struct OptimizeResult {
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Evaluates the objective at x and writes the gradient into the second
/// argument (pre-sized to x.size(), zeroed by the caller of the callback).
using Objective =
    std::function<double(const std::vector<double>&, std::vector<double>&)>;

/// Limited-memory BFGS with backtracking Armijo line search. Fully
/// deterministic for a deterministic objective.
OptimizeResult minimize_lbfgs(const Objective& f, std::vector<double> x0,
                              const OptimizeOptions& options);

}  // namespace eduseg

#endif
