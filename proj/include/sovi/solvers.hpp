#pragma once

// Value iteration, Q-value iteration and second-order value iteration (Newton
// steps on Q - UQ = 0), plus exact policy evaluation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sovi/mdp.hpp"
#include "sovi/smooth_ops.hpp"

namespace sovi {

struct SolverConfig {
  std::size_t max_iters = 50;
  /// Stop once ||Q_n - Q_{n-1}||_inf <= tolerance. 0 runs all max_iters.
  double tolerance = 0.0;
  /// Required by second_order_value_iteration() and ignored by the first-order solvers.
  std::optional<SmoothingParam> smoothing;

  void validate() const;
};

/// What e_n in a trace is measured against. At most one should be set; a
/// Q reference gives ||Q_n - Q_ref||, a value reference ||V_ref - max_a Q_n||.
struct Reference {
  std::optional<QTable> q;
  std::optional<ValueFn> value;
};

struct IterationRecord {
  std::size_t iteration;  // n >= 1; the record describes iterate n
  double residual;        // ||X_n - X_{n-1}||_inf
  std::optional<double> error;
  std::int64_t wall_time_ns;
};

struct RunTrace {
  std::vector<IterationRecord> iterates;
  /// Final iterate. For value_iteration this is the one-step lookahead
  /// r + gamma P V_final, whose row maxima equal T(V_final).
  QTable final_q{0, 0};
  ValueFn final_value;
  bool converged = false;
};

/// Raised on non-finite or runaway iterates and on singular Newton systems.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Iterates are rejected once any entry exceeds this magnitude.
inline constexpr double kDivergenceBound = 1e12;

RunTrace value_iteration(const Mdp& m, const ValueFn& v0, const SolverConfig& cfg,
                         const Reference& ref = {});

RunTrace q_value_iteration(const Mdp& m, const QTable& q0, const SolverConfig& cfg,
                           const Reference& ref = {});

RunTrace second_order_value_iteration(const Mdp& m, const QTable& q0, const SolverConfig& cfg,
                                      const Reference& ref = {});

/// Q - (I - J_U(Q))^{-1} (Q - UQ), realized as one dense linear solve.
QTable newton_step(const Mdp& m, const QTable& q, SmoothingParam n);
QTable newton_step(const Mdp& m, const QTable& expected_r, const QTable& q, SmoothingParam n);

/// Solves (I - gamma P_pi) V = r_pi.
ValueFn policy_evaluation(const Mdp& m, const Policy& pi);

/// Optimal value function: Q-value iteration from zero to the given residual,
/// then exact evaluation of its greedy policy.
ValueFn optimal_value(const Mdp& m, double residual_tolerance = 1e-12,
                      std::size_t max_iters = 1'000'000);

/// Fixed point of U by Newton iteration from zero until the residual is at
/// most `residual_tolerance` (or stops decreasing).
QTable smoothed_fixed_point(const Mdp& m, SmoothingParam n, double residual_tolerance = 1e-12,
                            std::size_t max_iters = 200);

}  // namespace sovi
