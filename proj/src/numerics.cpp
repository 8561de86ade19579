#include "fjm/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace fjm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

DiagPlusLaplacianOperator::DiagPlusLaplacianOperator(const Graph& g, std::vector<double> gamma_diag,
                                                     double laplacian_scale)
    : graph_(&g), gamma_(std::move(gamma_diag)), scale_(laplacian_scale) {
    if (gamma_.size() != g.num_nodes())
        throw std::invalid_argument("operator: diagonal length does not match node count");
    for (double v : gamma_)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("operator: diagonal entries must be positive");
    if (!(scale_ >= 0.0) || !std::isfinite(scale_))
        throw std::invalid_argument("operator: laplacian scale must be nonnegative");
}

void DiagPlusLaplacianOperator::apply(std::span<const double> x, std::span<double> y) const {
    laplacian_apply(*graph_, x, y);
    for (std::size_t i = 0; i < gamma_.size(); ++i) y[i] = gamma_[i] * x[i] + scale_ * y[i];
}

std::vector<double> DiagPlusLaplacianOperator::apply(std::span<const double> x) const {
    std::vector<double> y(x.size());
    apply(x, y);
    return y;
}

SolveReport solve_spd(const DiagPlusLaplacianOperator& op, std::span<const double> rhs, double tol,
                      std::size_t max_iter, std::span<const double> initial_guess) {
    const std::size_t n = op.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_spd: rhs length does not match operator");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_spd: tol must be positive");
    if (!initial_guess.empty() && initial_guess.size() != n)
        throw std::invalid_argument("solve_spd: initial guess length does not match operator");
    if (max_iter == 0) max_iter = std::max<std::size_t>(10 * n, 10);

    SolveReport rep;
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) {
        rep.solution.assign(n, 0.0);
        return rep;
    }

    std::vector<double> x(n, 0.0), r(n), p(n), q(n);
    if (!initial_guess.empty()) x.assign(initial_guess.begin(), initial_guess.end());
    const double target = tol * bnorm;

    // Recomputes the true residual and restarts whenever the recursive one
    // has converged, so the reported residual always meets tol.
    auto true_residual = [&] {
        op.apply(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
        return dot(r, r);
    };

    std::size_t it = 0;
    double rr = true_residual();
    while (std::sqrt(rr) > target) {
        p = r;
        while (std::sqrt(rr) > target) {
            if (it == max_iter)
                throw NonConvergence("solve_spd: no convergence after " + std::to_string(it) +
                                         " iterations",
                                     it, std::sqrt(rr) / bnorm);
            op.apply(p, q);
            const double step = rr / dot(p, q);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += step * p[i];
                r[i] -= step * q[i];
            }
            const double rr_next = dot(r, r);
            const double mix = rr_next / rr;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + mix * p[i];
            rr = rr_next;
            ++it;
        }
        rr = true_residual();
    }

    rep.solution = std::move(x);
    rep.iterations = it;
    rep.residual = std::sqrt(rr) / bnorm;
    return rep;
}

SolveReport fixed_point_iterate(const StepMap& step, std::span<const double> x0, double tol,
                                std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_iterate: tol must be positive");

    std::vector<double> x(x0.begin(), x0.end()), next(x0.size());
    double change = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        step(x, next);
        change = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::abs(next[i] - x[i]));
        x.swap(next);
        if (change <= tol) return {std::move(x), it, change};
    }
    throw NonConvergence("fixed_point_iterate: no convergence after " + std::to_string(max_iter) +
                             " iterations",
                         max_iter, change);
}

}  // namespace fjm
