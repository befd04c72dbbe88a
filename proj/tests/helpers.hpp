#pragma once

// Small hand-built MDPs and independent oracles shared by the unit suites.
// The oracles deliberately avoid the library's solver paths: long-double
// direct sums, finite differences, Neumann series and policy enumeration.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sovi/generator.hpp"
#include "sovi/mdp.hpp"
#include "sovi/smooth_ops.hpp"

namespace testing {

/// One state; every action loops back with reward `r`.
inline sovi::Mdp self_loop(std::size_t actions, double r, double gamma) {
  return sovi::Mdp(1, actions, std::vector<double>(actions, 1.0),
                   std::vector<double>(actions, r), gamma);
}

/// Two states, one action, 0 -> 1 -> 0; reward rewards[i] when leaving i.
inline sovi::Mdp two_cycle(double r0, double r1, double gamma) {
  return sovi::Mdp(2, 1, {0.0, 1.0, 1.0, 0.0}, {r0, r0, r1, r1}, gamma);
}

inline sovi::Mdp random_mdp(std::size_t s, std::size_t a, double gamma, std::uint64_t seed) {
  sovi::GeneratorConfig g;
  g.num_states = s;
  g.num_actions = a;
  g.gamma = gamma;
  g.seed = seed;
  return sovi::random_mdp(g);
}

inline long double lse_direct(const std::vector<double>& x, double n) {
  long double sum = 0.0L;
  for (double v : x) sum += std::exp(static_cast<long double>(n) * v);
  return std::log(sum) / n;
}

/// Central-difference Jacobian of U, column by column.
inline std::vector<double> fd_jacobian(const sovi::Mdp& m, const sovi::QTable& q,
                                       sovi::SmoothingParam n, double h) {
  const std::size_t dim = q.size();
  std::vector<double> jac(dim * dim);
  sovi::QTable x = q;
  for (std::size_t col = 0; col < dim; ++col) {
    const double orig = x.flat()[col];
    x.flat()[col] = orig + h;
    const sovi::QTable up = sovi::smoothed_U(m, x, n);
    x.flat()[col] = orig - h;
    const sovi::QTable down = sovi::smoothed_U(m, x, n);
    x.flat()[col] = orig;
    for (std::size_t r = 0; r < dim; ++r) {
      jac[r * dim + col] = (up.flat()[r] - down.flat()[r]) / (2 * h);
    }
  }
  return jac;
}

/// V_pi by the Neumann series sum_t (gamma P_pi)^t r_pi, run until the tail
/// is below `eps`.
inline std::vector<long double> neumann_policy_value(const sovi::Mdp& m,
                                                     const std::vector<std::size_t>& pi,
                                                     long double eps = 1e-15L) {
  const std::size_t s = m.num_states();
  std::vector<long double> term(s), value(s, 0.0L);
  for (std::size_t i = 0; i < s; ++i) {
    long double r = 0.0L;
    for (std::size_t j = 0; j < s; ++j) r += (long double)m.p(i, pi[i], j) * m.r(i, pi[i], j);
    term[i] = r;
  }
  long double scale = 1.0L;
  for (long double t : term) scale = std::max(scale, std::fabs(t));
  for (long double tail = scale; tail > eps * (1.0L - m.gamma()); tail *= m.gamma()) {
    std::vector<long double> next(s, 0.0L);
    for (std::size_t i = 0; i < s; ++i) {
      value[i] += term[i];
      for (std::size_t j = 0; j < s; ++j) next[i] += m.gamma() * m.p(i, pi[i], j) * term[j];
    }
    term = std::move(next);
  }
  return value;
}

/// V* by enumerating every deterministic policy; feasible for |A|^|S| small.
inline std::vector<double> brute_force_optimal_value(const sovi::Mdp& m) {
  const std::size_t s = m.num_states();
  std::vector<std::size_t> pi(s, 0);
  std::vector<long double> best(s, -INFINITY);
  while (true) {
    auto v = neumann_policy_value(m, pi);
    for (std::size_t i = 0; i < s; ++i) best[i] = std::max(best[i], v[i]);
    std::size_t k = 0;
    while (k < s && ++pi[k] == m.num_actions()) pi[k++] = 0;
    if (k == s) break;
  }
  return {best.begin(), best.end()};
}

inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::fabs(x[k] - y[k]));
  return m;
}

}  // namespace testing
