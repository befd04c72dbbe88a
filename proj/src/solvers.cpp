#include "sovi/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sovi/linalg.hpp"

namespace sovi {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

void check_finite(std::span<const double> x, std::size_t iteration) {
  for (double v : x) {
    if (!std::isfinite(v) || std::fabs(v) > kDivergenceBound) {
      throw SolverError("iterate diverged at iteration " + std::to_string(iteration) +
                            " (entry " + std::to_string(v) + ")",
                        iteration);
    }
  }
}

void check_q(const Mdp& m, const QTable& q) {
  if (q.num_states() != m.num_states() || q.num_actions() != m.num_actions()) {
    throw std::invalid_argument("initial Q-table is " + std::to_string(q.num_states()) + "x" +
                                std::to_string(q.num_actions()) + " but MDP is " +
                                std::to_string(m.num_states()) + "x" +
                                std::to_string(m.num_actions()));
  }
}

void check_reference(const Mdp& m, const Reference& ref) {
  if (ref.q && (ref.q->num_states() != m.num_states() ||
                ref.q->num_actions() != m.num_actions())) {
    throw std::invalid_argument("reference Q-table shape does not match the MDP");
  }
  if (ref.value && ref.value->size() != m.num_states()) {
    throw std::invalid_argument("reference value function length does not match the MDP");
  }
}

std::optional<double> q_error(const QTable& q, const Reference& ref) {
  if (ref.q) return max_norm_diff(q, *ref.q);
  if (ref.value) return max_norm_diff(*ref.value, value_from_q(q));
  return std::nullopt;
}

template <typename Step>
RunTrace iterate_q(const Mdp& m, const QTable& q0, const SolverConfig& cfg, const Reference& ref,
                   Step step) {
  cfg.validate();
  check_q(m, q0);
  check_reference(m, ref);
  check_finite(q0.flat(), 0);

  RunTrace trace;
  trace.iterates.reserve(cfg.max_iters);
  QTable q = q0;
  for (std::size_t n = 1; n <= cfg.max_iters; ++n) {
    const auto start = Clock::now();
    QTable next = step(q, n);
    check_finite(next.flat(), n);
    const double residual = max_norm_diff(next, q);
    const auto ns = elapsed_ns(start);
    q = std::move(next);
    trace.iterates.push_back({n, residual, q_error(q, ref), ns});
    trace.converged = residual <= cfg.tolerance;
    if (cfg.tolerance > 0.0 && trace.converged) break;
  }
  trace.final_value = value_from_q(q);
  trace.final_q = std::move(q);
  return trace;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
}

RunTrace value_iteration(const Mdp& m, const ValueFn& v0, const SolverConfig& cfg,
                         const Reference& ref) {
  cfg.validate();
  if (v0.size() != m.num_states()) {
    throw std::invalid_argument("initial value function has " + std::to_string(v0.size()) +
                                " entries but MDP has " + std::to_string(m.num_states()) +
                                " states");
  }
  if (ref.q) throw std::invalid_argument("value_iteration only accepts a value reference");
  check_reference(m, ref);
  check_finite(v0.values, 0);

  const QTable r = expected_reward(m);
  RunTrace trace;
  trace.iterates.reserve(cfg.max_iters);
  ValueFn v = v0;
  for (std::size_t n = 1; n <= cfg.max_iters; ++n) {
    const auto start = Clock::now();
    ValueFn next = bellman_T(m, r, v);
    check_finite(next.values, n);
    const double residual = max_norm_diff(next, v);
    const auto ns = elapsed_ns(start);
    v = std::move(next);
    std::optional<double> err;
    if (ref.value) err = max_norm_diff(*ref.value, v);
    trace.iterates.push_back({n, residual, err, ns});
    trace.converged = residual <= cfg.tolerance;
    if (cfg.tolerance > 0.0 && trace.converged) break;
  }
  // Lookahead Q of the final value function: bellman_Q(Q) only reads max_a Q.
  QTable lookahead(m.num_states(), m.num_actions());
  for (std::size_t i = 0; i < m.num_states(); ++i) {
    for (std::size_t a = 0; a < m.num_actions(); ++a) lookahead(i, a) = v[i];
  }
  trace.final_q = bellman_Q(m, r, lookahead);
  trace.final_value = std::move(v);
  return trace;
}

RunTrace q_value_iteration(const Mdp& m, const QTable& q0, const SolverConfig& cfg,
                           const Reference& ref) {
  const QTable r = expected_reward(m);
  return iterate_q(m, q0, cfg, ref,
                   [&](const QTable& q, std::size_t) { return bellman_Q(m, r, q); });
}

QTable newton_step(const Mdp& m, const QTable& expected_r, const QTable& q, SmoothingParam n) {
  const std::size_t dim = m.num_pairs();
  const JacobianMatrix jac = jacobian_U(m, q, n);
  const QTable uq = smoothed_U(m, expected_r, q, n);

  DenseMatrix system(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    auto src = jac.row(r);
    auto dst = system.row(r);
    for (std::size_t c = 0; c < dim; ++c) dst[c] = -src[c];
    dst[r] += 1.0;
  }
  std::vector<double> rhs(dim);
  for (std::size_t k = 0; k < dim; ++k) rhs[k] = q.flat()[k] - uq.flat()[k];

  const std::vector<double> step = solve_linear(std::move(system), rhs);
  QTable next = q;
  auto out = next.flat();
  for (std::size_t k = 0; k < dim; ++k) out[k] -= step[k];
  return next;
}

QTable newton_step(const Mdp& m, const QTable& q, SmoothingParam n) {
  check_q(m, q);
  return newton_step(m, expected_reward(m), q, n);
}

RunTrace second_order_value_iteration(const Mdp& m, const QTable& q0, const SolverConfig& cfg,
                                      const Reference& ref) {
  if (!cfg.smoothing) throw std::invalid_argument("sovi requires a smoothing parameter N");
  const SmoothingParam n = *cfg.smoothing;
  const QTable r = expected_reward(m);
  return iterate_q(m, q0, cfg, ref, [&](const QTable& q, std::size_t iteration) {
    try {
      return newton_step(m, r, q, n);
    } catch (const SingularSystemError& e) {
      throw SolverError(std::string("Newton system at iteration ") + std::to_string(iteration) +
                            ": " + e.what(),
                        iteration);
    }
  });
}

ValueFn policy_evaluation(const Mdp& m, const Policy& pi) {
  const std::size_t s = m.num_states();
  if (pi.size() != s) {
    throw std::invalid_argument("policy has " + std::to_string(pi.size()) +
                                " entries but MDP has " + std::to_string(s) + " states");
  }
  const QTable r = expected_reward(m);
  DenseMatrix system = DenseMatrix::identity(s);
  std::vector<double> rhs(s);
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t a = pi[i];
    if (a >= m.num_actions()) {
      throw std::invalid_argument("policy action " + std::to_string(a) + " at state " +
                                  std::to_string(i) + " is out of range");
    }
    auto p = m.transition_row(i, a);
    for (std::size_t j = 0; j < s; ++j) system(i, j) -= m.gamma() * p[j];
    rhs[i] = r(i, a);
  }
  return ValueFn{solve_linear(std::move(system), rhs)};
}

ValueFn optimal_value(const Mdp& m, double residual_tolerance, std::size_t max_iters) {
  SolverConfig cfg;
  cfg.max_iters = max_iters;
  cfg.tolerance = residual_tolerance;
  const RunTrace trace =
      q_value_iteration(m, QTable(m.num_states(), m.num_actions()), cfg);
  return policy_evaluation(m, greedy_policy(trace.final_q));
}

QTable smoothed_fixed_point(const Mdp& m, SmoothingParam n, double residual_tolerance,
                            std::size_t max_iters) {
  const QTable r = expected_reward(m);
  QTable q(m.num_states(), m.num_actions());
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iters; ++it) {
    QTable next = newton_step(m, r, q, n);
    const double residual = max_norm_diff(next, q);
    q = std::move(next);
    // Round-off floor reached: further steps only jitter.
    if (residual <= residual_tolerance || (residual >= previous && residual < 1e-9)) break;
    previous = residual;
  }
  return q;
}

}  // namespace sovi
