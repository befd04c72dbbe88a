#include "sovi/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sovi/kernels.hpp"

namespace sovi {

Mdp::Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transitions,
         std::vector<double> rewards, double gamma)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      gamma_(gamma) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw std::invalid_argument("MDP needs at least one state and one action");
  }
  const std::size_t expected = num_states_ * num_actions_ * num_states_;
  if (transitions_.size() != expected) {
    throw std::invalid_argument("transition tensor has " + std::to_string(transitions_.size()) +
                                " entries, expected " + std::to_string(expected));
  }
  if (rewards_.size() != expected) {
    throw std::invalid_argument("reward tensor has " + std::to_string(rewards_.size()) +
                                " entries, expected " + std::to_string(expected));
  }
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, double fill)
    : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, fill) {}

QTable::QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
  if (values_.size() != num_states_ * num_actions_) {
    throw std::invalid_argument("Q-table has " + std::to_string(values_.size()) +
                                " entries, expected " +
                                std::to_string(num_states_ * num_actions_));
  }
}

bool QTable::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ValidationReport validate_mdp(const Mdp& m) {
  ValidationReport report;
  if (!(m.gamma() >= 0.0 && m.gamma() < 1.0)) {
    std::ostringstream os;
    os << "gamma out of range [0, 1): " << m.gamma();
    report.violations.push_back(os.str());
  }
  for (std::size_t i = 0; i < m.num_states(); ++i) {
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      double sum = 0.0;
      bool negative = false;
      bool finite = true;
      for (double p : m.transition_row(i, a)) {
        if (!std::isfinite(p)) finite = false;
        if (p < 0.0) negative = true;
        sum += p;
      }
      for (double r : m.reward_row(i, a)) {
        if (!std::isfinite(r)) finite = false;
      }
      std::ostringstream os;
      os << "row (" << i << "," << a << ")";
      if (!finite) {
        report.violations.push_back(os.str() + " has non-finite entries");
        continue;
      }
      if (negative) report.violations.push_back(os.str() + " has negative probabilities");
      if (std::fabs(sum - 1.0) > kRowSumTolerance) {
        os << " sums to " << sum;
        report.violations.push_back(os.str());
      }
    }
  }
  return report;
}

QTable expected_reward(const Mdp& m) {
  const auto& k = kernels::active();
  QTable out(m.num_states(), m.num_actions());
  for (std::size_t i = 0; i < m.num_states(); ++i) {
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      out(i, a) = k.dot(m.transition_row(i, a).data(), m.reward_row(i, a).data(), m.num_states());
    }
  }
  return out;
}

ValueFn value_from_q(const QTable& q) {
  const auto& k = kernels::active();
  ValueFn v{std::vector<double>(q.num_states())};
  for (std::size_t i = 0; i < q.num_states(); ++i) {
    v[i] = k.max(q.row(i).data(), q.num_actions());
  }
  return v;
}

Policy greedy_policy(const QTable& q) {
  Policy pi{std::vector<std::size_t>(q.num_states(), 0)};
  for (std::size_t i = 0; i < q.num_states(); ++i) {
    auto row = q.row(i);
    std::size_t best = 0;
    for (std::size_t a = 1; a < row.size(); ++a) {
      if (row[a] > row[best]) best = a;
    }
    pi.actions[i] = best;
  }
  return pi;
}

}  // namespace sovi
