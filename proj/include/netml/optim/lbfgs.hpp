#pragma once

#include <cmath>
#include <deque>
#include <utility>

#include "netml/dataset.hpp"

namespace netml {

struct LbfgsOptions {
    int max_iterations = 1000;
    double grad_tolerance = 1e-5;  // sup-norm of the gradient
    int memory = 10;
    int max_line_search = 50;
};

struct LbfgsResult {
    Vector x;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Limited-memory quasi-Newton minimizer with two-loop recursion and an
// Armijo backtracking line search. The objective callable must return f(x)
// and fill the gradient.
template <typename Objective>
LbfgsResult lbfgs_minimize(Objective&& objective, Vector x0, const LbfgsOptions& opts = {}) {
    const Eigen::Index n = x0.size();
    Vector x = std::move(x0);
    Vector grad(n);
    double fx = objective(x, grad);

    std::deque<std::pair<Vector, Vector>> history;  // (s, y) pairs
    LbfgsResult result;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() <= opts.grad_tolerance) {
            result.converged = true;
            result.iterations = iter;
            break;
        }

        // two-loop recursion for the search direction
        Vector q = grad;
        std::vector<double> alphas(history.size());
        for (std::size_t h = history.size(); h-- > 0;) {
            const auto& [s, y] = history[h];
            const double rho = 1.0 / y.dot(s);
            alphas[h] = rho * s.dot(q);
            q -= alphas[h] * y;
        }
        if (!history.empty()) {
            const auto& [s, y] = history.back();
            q *= s.dot(y) / y.dot(y);
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            const auto& [s, y] = history[h];
            const double rho = 1.0 / y.dot(s);
            const double beta = rho * y.dot(q);
            q += (alphas[h] - beta) * s;
        }
        Vector direction = -q;

        double dg = grad.dot(direction);
        if (dg >= 0.0) {  // safeguard: fall back to steepest descent
            direction = -grad;
            dg = -grad.squaredNorm();
        }

        double step = 1.0;
        const double fx0 = fx;
        Vector x_new(n), grad_new(n);
        bool accepted = false;
        for (int ls = 0; ls < opts.max_line_search; ++ls) {
            x_new = x + step * direction;
            const double f_new = objective(x_new, grad_new);
            if (std::isfinite(f_new) && f_new <= fx0 + 1e-4 * step * dg) {
                accepted = true;
                fx = f_new;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.iterations = iter;
            break;  // no progress possible at this scale; return best so far
        }

        Vector s = x_new - x;
        Vector y = grad_new - grad;
        const double sy = s.dot(y);
        if (sy > 1e-10 * s.norm() * y.norm()) {
            history.emplace_back(std::move(s), std::move(y));
            if (history.size() > static_cast<std::size_t>(opts.memory)) history.pop_front();
        }
        x = std::move(x_new);
        grad = std::move(grad_new);
        result.iterations = iter + 1;
    }

    if (!result.converged && grad.lpNorm<Eigen::Infinity>() <= opts.grad_tolerance)
        result.converged = true;
    result.x = std::move(x);
    result.fx = fx;
    return result;
}

}  // namespace netml
