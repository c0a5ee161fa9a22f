#pragma once

// Finite-scenario stochastic dynamic programming.
//
// Random variables over a stage's scenario set are maps from scenario index
// to grid index, so every expectation, infimum and supremum below is a finite
// enumeration.  The pairing between a state random variable X and a dual one
// X# is  E[<X, X#>]  with the scenario probabilities of the stage.

#include <cstddef>
#include <span>
#include <vector>

#include "conjugax/conjugacy.hpp"
#include "conjugax/report.hpp"
#include "conjugax/sets.hpp"

namespace conjugax {

/// Default cap on |grid|^|scenarios| for random-variable enumeration.
inline constexpr std::size_t kDefaultEnumerationBudget = 100'000;

struct Scenario {
    std::vector<double> point;
    double prob = 0.0;
};

/// One decision stage: next-state indices and costs over (x, u, w), stored
/// with index (x * |U| + u) * |W| + w.
struct Stage {
    std::vector<Scenario> scenarios;
    std::vector<std::size_t> dynamics;
    std::vector<ExtReal> costs;
};

struct SdpInstance {
    SetRef state_grid;
    SetRef control_grid;
    SetRef dual_grid;
    std::vector<Stage> stages;
    /// Must be replaced by a table on the state grid before use.
    ValueTable final_cost{make_abstract_set("unset", 1), {ExtReal(0.0)}};

    [[nodiscard]] std::size_t horizon() const noexcept { return stages.size(); }
    [[nodiscard]] std::size_t scenario_count(std::size_t t) const { return stages.at(t).scenarios.size(); }
    [[nodiscard]] std::size_t next_state(std::size_t t, std::size_t x, std::size_t u,
                                         std::size_t w) const;
    [[nodiscard]] ExtReal cost(std::size_t t, std::size_t x, std::size_t u, std::size_t w) const;
    [[nodiscard]] std::vector<double> probabilities(std::size_t t) const;

    /// Throws std::invalid_argument naming the first broken invariant:
    /// nonnegative costs, on-grid dynamics, positive probabilities summing
    /// to 1 within 1e-12, matching grid dimensions.
    void validate() const;
};

/// Grid index per scenario.
using RandomVariable = std::vector<std::size_t>;

/// Probability-weighted sum in scenario order.  Any +inf gives +inf; otherwise
/// any -inf gives -inf.  Throws std::invalid_argument("non-integrable mixture")
/// when both occur.
[[nodiscard]] ExtReal expectation(std::span<const ExtReal> values, std::span<const double> probs);

/// V[t] for t = 0..T, with V[T] the final cost.
[[nodiscard]] std::vector<ValueTable> backward_induction(const SdpInstance& inst);

/// E[ l_t(x, u, W) (upper+) <f_t(x, u, W), X#(W)> ].
[[nodiscard]] ExtReal hamiltonian(const SdpInstance& inst, std::size_t t, std::size_t x,
                                  std::size_t u, const RandomVariable& dual);

/// Random variable number `code` over `grid_size` points and `scenarios` scenarios
/// (row-major, scenario 0 outermost).
[[nodiscard]] RandomVariable random_variable(std::size_t code, std::size_t grid_size,
                                             std::size_t scenarios);

/// Checks V_t(x) = inf_X [inf_u (-H(x,u,.))^{(-*)}(X)] (upper+) E[V_{t+1}(X)]
/// for t < T and every state within `tol`.
/// Throws std::length_error("dual enumeration too large") past `budget`.
[[nodiscard]] CheckReport hamiltonian_form_check(const SdpInstance& inst,
                                                 double tol = kDefaultTolerance,
                                                 std::size_t budget = kDefaultEnumerationBudget);

/// Checks V_t^*(x#) <= inf_{X#} [sup_u H(., u, X#)^*(x#)] (upper+) E[V_{t+1}^*(X#)]
/// for t < T and every dual grid point; margins are the slacks.
[[nodiscard]] CheckReport conjugate_bellman_check(const SdpInstance& inst,
                                                  double tol = kDefaultTolerance,
                                                  std::size_t budget = kDefaultEnumerationBudget);

/// Checks (X -> E[V_{t+1}(X)])^*(X#) <= E[V_{t+1}^*(X#)] at every dual random
/// variable of stage t.  Equality is counted in the notes, not asserted.
[[nodiscard]] CheckReport expectation_conjugate_check(const SdpInstance& inst, std::size_t t,
                                                      double tol = kDefaultTolerance,
                                                      std::size_t budget = kDefaultEnumerationBudget);

/// An affine function x -> <slope, x> + intercept, with the slope given as a grid index.
struct Cut {
    std::size_t slope_index = 0;
    ExtReal intercept;
};

struct SandwichStage {
    /// Cuts of V_t (slopes on the dual grid) and of V_t^* (slopes on the state grid),
    /// in generation order.
    std::vector<Cut> primal_cuts;
    std::vector<Cut> dual_cuts;
    /// lower[k], upper[k] for k = 0..iterations, on the state grid.
    std::vector<ValueTable> lower;
    std::vector<ValueTable> upper;
    bool premise_holds = false;
};

struct SandwichResult {
    std::vector<SandwichStage> stages;  // t = 0..T
    CheckReport report;
};

/// Round-robin cut generation, lowest index first.  Iteration k adds the
/// primal cut at dual point (k-1) mod |X#| and the dual cut at state point
/// (k-1) mod |X|.  The lower bound is max(0, primal cuts); the upper bound is
/// the conjugate of the dual-cut minorant of V_t^*, +inf at k = 0.
[[nodiscard]] SandwichResult sandwich_bounds(const SdpInstance& inst, std::size_t iterations,
                                             double tol = kDefaultTolerance);

/// Symmetric uniform grid on [-S, S] with S = (finite cost range) / (state span),
/// for a 1-D state grid; `points` must be at least 2.
[[nodiscard]] SetRef default_dual_grid(const SdpInstance& inst, std::size_t points);

}  // namespace conjugax
