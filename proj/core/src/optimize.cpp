#include "eduseg/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>

#include "eduseg/errors.hpp"

namespace eduseg {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct Pair {
    std::vector<double> s;  // x_{k+1} - x_k
    std::vector<double> y;  // g_{k+1} - g_k
    double rho;             // 1 / (y . s)
};

/// Two-loop recursion; returns the descent direction -H g.
std::vector<double> direction(const std::deque<Pair>& memory, const std::vector<double>& grad) {
    std::vector<double> q = grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        alpha[k] = memory[k].rho * dot(memory[k].s, q);
        for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[k] * memory[k].y[j];
    }
    if (!memory.empty()) {
        const Pair& last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const double beta = memory[k].rho * dot(memory[k].y, q);
        for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha[k] - beta) * memory[k].s[j];
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

OptimizeResult minimize_lbfgs(const Objective& f, std::vector<double> x0,
                              const OptimizeOptions& options) {
    if (options.max_iterations < 1) throw ArgumentError("max_iterations must be positive");
    if (options.tolerance <= 0.0) throw ArgumentError("tolerance must be positive");
    if (options.history < 1) throw ArgumentError("history must be positive");

    const std::size_t n = x0.size();
    OptimizeResult result;
    result.x = std::move(x0);

    std::vector<double> grad(n, 0.0);
    double fx = f(result.x, grad);

    std::deque<Pair> memory;
    std::vector<double> new_grad(n, 0.0);
    std::vector<double> trial(n, 0.0);

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        result.iterations = iter;
        if (norm(grad) / std::max(1.0, norm(result.x)) < options.tolerance) {
            result.converged = true;
            result.iterations = iter - 1;
            break;
        }

        std::vector<double> dir = direction(memory, grad);
        double dg = dot(dir, grad);
        if (!(dg < 0.0)) {  // not a descent direction; fall back to steepest descent
            memory.clear();
            for (std::size_t k = 0; k < n; ++k) dir[k] = -grad[k];
            dg = dot(dir, grad);
            if (!(dg < 0.0)) {  // zero gradient
                result.converged = true;
                break;
            }
        }

        // Backtracking Armijo search. First iteration starts at 1/|g| to
        // temper the unscaled steepest-descent step.
        double step = memory.empty() ? 1.0 / std::max(1.0, norm(grad)) : 1.0;
        const double c1 = 1e-4;
        double fx_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t k = 0; k < n; ++k) trial[k] = result.x[k] + step * dir[k];
            std::fill(new_grad.begin(), new_grad.end(), 0.0);
            fx_new = f(trial, new_grad);
            if (std::isfinite(fx_new) && fx_new <= fx + c1 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {  // objective numerically flat along every scale
            result.converged = true;
            break;
        }

        Pair pair;
        pair.s.resize(n);
        pair.y.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            pair.s[k] = trial[k] - result.x[k];
            pair.y[k] = new_grad[k] - grad[k];
        }
        const double ys = dot(pair.y, pair.s);
        if (ys > 1e-10 * norm(pair.y) * norm(pair.s)) {  // curvature condition
            pair.rho = 1.0 / ys;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
        }

        const double decrease = fx - fx_new;
        result.x = trial;
        grad = new_grad;
        fx = fx_new;

        // An accepted step whose decrease is at machine precision cannot be
        // improved on; stopping here is convergence, not failure.
        if (decrease <= 1e-14 * std::max({1.0, std::abs(fx), std::abs(fx_new)})) {
            result.converged = true;
            break;
        }
    }

    result.objective = fx;
    return result;
}

}  // namespace eduseg
