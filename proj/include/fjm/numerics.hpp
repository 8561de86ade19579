#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fjm/graph.hpp"

namespace fjm {

/// The operator  x -> gamma_diag .* x + laplacian_scale * L x.
///
/// With every gamma_diag entry positive this is a nonsingular M-matrix, so
/// it is symmetric positive definite and has an elementwise nonnegative
/// inverse.
class DiagPlusLaplacianOperator {
public:
    DiagPlusLaplacianOperator(const Graph& g, std::vector<double> gamma_diag,
                              double laplacian_scale = 1.0);

    std::size_t size() const { return gamma_.size(); }
    const Graph& graph() const { return *graph_; }
    std::span<const double> gamma_diag() const { return gamma_; }
    double laplacian_scale() const { return scale_; }

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

private:
    const Graph* graph_;
    std::vector<double> gamma_;
    double scale_;
};

struct SolveReport {
    std::vector<double> solution;
    std::size_t iterations = 0;
    double residual = 0.0;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::size_t iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
    std::size_t iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

inline constexpr double kDefaultSolveTol = 1e-10;

/// Unpreconditioned conjugate gradient on (Gamma + L) x = rhs.
///
/// Stops once ||rhs - A x||_2 <= tol * ||rhs||_2. max_iter == 0 selects
/// 10 * n. A zero right-hand side returns x = 0 with zero iterations. The
/// optional initial guess must have length n.
SolveReport solve_spd(const DiagPlusLaplacianOperator& op, std::span<const double> rhs,
                      double tol = kDefaultSolveTol, std::size_t max_iter = 0,
                      std::span<const double> initial_guess = {});

using StepMap = std::function<void(std::span<const double> in, std::span<double> out)>;

/// Repeats x <- step(x) until the l-infinity change of one application is
/// at most tol. `iterations` counts applications of `step`; `residual`
/// holds the final change. Convergence requires the linear part of `step`
/// to have spectral radius below one.
SolveReport fixed_point_iterate(const StepMap& step, std::span<const double> x0, double tol,
                                std::size_t max_iter);

}  // namespace fjm
