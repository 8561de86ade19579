#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fjm/graph.hpp"
#include "fjm/numerics.hpp"

namespace fjm {

/// Per-node opinions, every entry in [0, 1].
class OpinionVector {
public:
    OpinionVector() = default;
    /// Throws std::invalid_argument if any entry lies outside [0, 1].
    explicit OpinionVector(std::vector<double> values);

    /// For solver output: entries within `slack` of [0, 1] are clamped into
    /// it, anything further out throws.
    static OpinionVector from_solution(std::vector<double> values, double slack = 1e-8);

    static OpinionVector constant(std::size_t n, double c) { return OpinionVector(std::vector<double>(n, c)); }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const& { return values_; }
    std::vector<double> values() && { return std::move(values_); }
    operator std::span<const double>() const { return values_; }

    double sum() const;
    double mean() const { return values_.empty() ? 0.0 : sum() / static_cast<double>(values_.size()); }

private:
    std::vector<double> values_;
};

enum class EquilibriumMethod { DirectSolve, Iterate };

/// One synchronous FJ update; each innate opinion carries unit weight.
OpinionVector fj_step(const Graph& g, const OpinionVector& s, const OpinionVector& z);

/// z* = (I + L)^{-1} s. Iterate runs fj_step from z = s until the
/// l-infinity change is at most tol.
OpinionVector fj_equilibrium(const Graph& g, const OpinionVector& s,
                             EquilibriumMethod method = EquilibriumMethod::DirectSolve,
                             double tol = kDefaultSolveTol);

/// Iteration cap used by the Iterate method of the equilibrium solvers.
inline constexpr std::size_t kMaxFixedPointIterations = 1'000'000;

}  // namespace fjm
