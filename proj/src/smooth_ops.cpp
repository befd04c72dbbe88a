#include "sovi/smooth_ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sovi/kernels.hpp"

namespace sovi {
namespace {

void check_q_dims(const Mdp& m, const QTable& q, const char* what) {
  if (q.num_states() != m.num_states() || q.num_actions() != m.num_actions()) {
    throw std::invalid_argument(std::string(what) + ": Q-table is " +
                                std::to_string(q.num_states()) + "x" +
                                std::to_string(q.num_actions()) + " but MDP is " +
                                std::to_string(m.num_states()) + "x" +
                                std::to_string(m.num_actions()));
  }
}

// out(i, a) = r(i, a) + gamma * <p(.|i,a), next_value>
QTable backup(const Mdp& m, const QTable& expected_r, std::span<const double> next_value) {
  const auto& k = kernels::active();
  const std::size_t s = m.num_states();
  QTable out(s, m.num_actions());
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      out(i, a) = expected_r(i, a) + m.gamma() * k.dot(m.transition_row(i, a).data(),
                                                       next_value.data(), s);
    }
  }
  return out;
}

}  // namespace

SmoothingParam::SmoothingParam(double n) : n_(n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("smoothing parameter N must be positive and finite, got " +
                                std::to_string(n));
  }
}

double log_sum_exp(std::span<const double> x, SmoothingParam n) {
  if (x.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  const double big_n = n.value();
  const double m = kernels::active().max(x.data(), x.size());
  double sum = 0.0;
  for (double xi : x) sum += std::exp(big_n * (xi - m));
  // sum >= 1 because the maximizing term contributes exactly exp(0).
  return m + std::log(sum) / big_n;
}

void softmax_row(std::span<const double> x, SmoothingParam n, std::span<double> out) {
  if (x.empty()) throw std::invalid_argument("softmax_row: empty input");
  if (out.size() != x.size()) throw std::invalid_argument("softmax_row: output size mismatch");
  const double big_n = n.value();
  const double m = kernels::active().max(x.data(), x.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    out[c] = std::exp(big_n * (x[c] - m));
    sum += out[c];
  }
  for (double& w : out) w /= sum;
}

std::vector<double> softmax_row(std::span<const double> x, SmoothingParam n) {
  std::vector<double> out(x.size());
  softmax_row(x, n, out);
  return out;
}

ValueFn bellman_T(const Mdp& m, const QTable& expected_r, const ValueFn& v) {
  if (v.size() != m.num_states()) {
    throw std::invalid_argument("bellman_T: value function has " + std::to_string(v.size()) +
                                " entries but MDP has " + std::to_string(m.num_states()) +
                                " states");
  }
  return value_from_q(backup(m, expected_r, v.values));
}

ValueFn bellman_T(const Mdp& m, const ValueFn& v) {
  return bellman_T(m, expected_reward(m), v);
}

QTable bellman_Q(const Mdp& m, const QTable& expected_r, const QTable& q) {
  check_q_dims(m, q, "bellman_Q");
  return backup(m, expected_r, value_from_q(q).values);
}

QTable bellman_Q(const Mdp& m, const QTable& q) {
  check_q_dims(m, q, "bellman_Q");
  return bellman_Q(m, expected_reward(m), q);
}

QTable smoothed_U(const Mdp& m, const QTable& expected_r, const QTable& q, SmoothingParam n) {
  check_q_dims(m, q, "smoothed_U");
  std::vector<double> soft_value(m.num_states());
  for (std::size_t j = 0; j < m.num_states(); ++j) soft_value[j] = log_sum_exp(q.row(j), n);
  return backup(m, expected_r, soft_value);
}

QTable smoothed_U(const Mdp& m, const QTable& q, SmoothingParam n) {
  check_q_dims(m, q, "smoothed_U");
  return smoothed_U(m, expected_reward(m), q, n);
}

JacobianMatrix jacobian_U(const Mdp& m, const QTable& q, SmoothingParam n) {
  check_q_dims(m, q, "jacobian_U");
  const std::size_t s = m.num_states();
  const std::size_t na = m.num_actions();

  // weights(k, c) = softmax(Q(k, .))[c], shared by every row of J.
  QTable weights(s, na);
  for (std::size_t k = 0; k < s; ++k) softmax_row(q.row(k), n, weights.row(k));

  JacobianMatrix jac(s * na);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t a = 0; a < na; ++a) {
      auto out = jac.row(i * na + a);
      auto p = m.transition_row(i, a);
      for (std::size_t k = 0; k < s; ++k) {
        const double scale = m.gamma() * p[k];
        for (std::size_t c = 0; c < na; ++c) out[k * na + c] = scale * weights(k, c);
      }
    }
  }
  return jac;
}

}  // namespace sovi
