#include "sovi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sovi/generator.hpp"
#include "sovi/linalg.hpp"
#include "sovi/smooth_ops.hpp"
#include "sovi/solvers.hpp"

namespace sovi {
namespace {

class Cases {
 public:
  explicit Cases(std::uint64_t seed) : eng_(seed) {}

  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(eng_() % (hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  std::uint64_t seed() { return eng_(); }

  Mdp mdp(std::size_t max_states, std::size_t max_actions, double gamma) {
    GeneratorConfig g;
    g.num_states = index(1, max_states);
    g.num_actions = index(1, max_actions);
    g.gamma = gamma;
    g.seed = seed();
    return random_mdp(g);
  }

  QTable q(const Mdp& m, double lo, double hi) {
    return random_q(m.num_states(), m.num_actions(), lo, hi, seed());
  }

 private:
  std::mt19937_64 eng_;
};

void record(PropertyResult& res, double margin, const std::string& what) {
  res.worst_margin = res.cases == 0 ? margin : std::max(res.worst_margin, margin);
  ++res.cases;
  if (margin > 0.0 && res.passed) {
    res.passed = false;
    res.detail = what;
  }
}

std::size_t scaled(std::size_t n, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n * scale)));
}

constexpr double kGammas[] = {0.5, 0.9, 0.99};

PropertyResult log_sum_exp_gap(Cases& rng, double scale) {
  PropertyResult res;
  res.name = "log_sum_exp_gap";
  constexpr double kNs[] = {1.0, 5.0, 10.0, 35.0};
  for (std::size_t t = 0, n = scaled(2000, scale); t < n; ++t) {
    const std::size_t d = rng.index(2, 10);
    std::vector<double> x(d);
    for (double& v : x) v = rng.uniform(-100.0, 100.0);
    const double big_n = kNs[rng.index(0, 3)];
    const double gap =
        log_sum_exp(x, SmoothingParam(big_n)) - *std::max_element(x.begin(), x.end());
    const double margin = std::max(-gap, gap - std::log(static_cast<double>(d)) / big_n) - 1e-12;
    std::ostringstream os;
    os << "d=" << d << " N=" << big_n << " gap=" << gap;
    record(res, margin, os.str());
  }
  return res;
}

PropertyResult contraction(Cases& rng, double scale, bool smoothed) {
  PropertyResult res;
  res.name = smoothed ? "smoothed_operator_contraction" : "bellman_operator_contraction";
  for (std::size_t t = 0, n = scaled(300, scale); t < n; ++t) {
    const double gamma = kGammas[rng.index(0, 2)];
    const Mdp m = rng.mdp(10, 5, gamma);
    const QTable p = rng.q(m, -50.0, 50.0);
    const QTable q = rng.q(m, -50.0, 50.0);
    const double lhs = smoothed
                           ? max_norm_diff(smoothed_U(m, p, SmoothingParam(10.0)),
                                           smoothed_U(m, q, SmoothingParam(10.0)))
                           : max_norm_diff(bellman_Q(m, p), bellman_Q(m, q));
    const double rhs = gamma * max_norm_diff(p, q);
    std::ostringstream os;
    os << "gamma=" << gamma << " lhs=" << lhs << " rhs=" << rhs;
    record(res, lhs - rhs - 1e-12, os.str());

    if (!smoothed) {
      const ValueFn v = value_from_q(p);
      const ValueFn w = value_from_q(q);
      const double lhs_v = max_norm_diff(bellman_T(m, v), bellman_T(m, w));
      const double rhs_v = gamma * max_norm_diff(v, w);
      record(res, lhs_v - rhs_v - 1e-12, "value operator: " + os.str());
    }
  }
  return res;
}

PropertyResult jacobian_structure(Cases& rng, double scale) {
  PropertyResult res;
  res.name = "jacobian_structure";
  for (std::size_t t = 0, n = scaled(50, scale); t < n; ++t) {
    const double gamma = kGammas[rng.index(0, 2)];
    const Mdp m = rng.mdp(6, 4, gamma);
    const QTable q = rng.q(m, -10.0, 10.0);
    const SmoothingParam big_n(rng.uniform(0.5, 10.0));
    const JacobianMatrix jac = jacobian_U(m, q, big_n);
    double worst = 0.0;
    for (std::size_t r = 0; r < jac.dim(); ++r) {
      double sum = 0.0;
      for (double v : jac.row(r)) {
        worst = std::max(worst, -v);
        sum += v;
      }
      worst = std::max(worst, std::fabs(sum - gamma) - 1e-10);
    }

    // Central differences of U, column by column.
    constexpr double h = 1e-6;
    double fd_err = 0.0;
    QTable bumped = q;
    for (std::size_t col = 0; col < jac.dim(); ++col) {
      const double orig = bumped.flat()[col];
      bumped.flat()[col] = orig + h;
      const QTable up = smoothed_U(m, bumped, big_n);
      bumped.flat()[col] = orig - h;
      const QTable down = smoothed_U(m, bumped, big_n);
      bumped.flat()[col] = orig;
      for (std::size_t r = 0; r < jac.dim(); ++r) {
        const double fd = (up.flat()[r] - down.flat()[r]) / (2 * h);
        fd_err = std::max(fd_err, std::fabs(fd - jac(r, col)));
      }
    }
    worst = std::max(worst, fd_err - 1e-5);
    std::ostringstream os;
    os << "dim=" << jac.dim() << " N=" << big_n.value() << " fd_err=" << fd_err;
    record(res, worst, os.str());
  }
  return res;
}

PropertyResult fixed_point_gap(Cases& rng, double scale) {
  PropertyResult res;
  res.name = "smoothed_fixed_point_gap";
  constexpr double kNs[] = {5.0, 10.0, 35.0};
  for (std::size_t t = 0, n = scaled(20, scale); t < n; ++t) {
    const double gamma = 0.9;
    const Mdp m = rng.mdp(10, 5, gamma);
    SolverConfig cfg;
    cfg.max_iters = 100000;
    cfg.tolerance = 1e-12;
    const QTable q_star = q_value_iteration(m, QTable(m.num_states(), m.num_actions()), cfg).final_q;
    for (double big_n : kNs) {
      const QTable q_smooth = smoothed_fixed_point(m, SmoothingParam(big_n));
      const double gap = max_norm_diff(q_star, q_smooth);
      const double bound =
          gamma * std::log(static_cast<double>(m.num_actions())) / (big_n * (1.0 - gamma));
      std::ostringstream os;
      os << "N=" << big_n << " gap=" << gap << " bound=" << bound;
      record(res, gap - bound - 1e-8, os.str());
    }
  }
  return res;
}

}  // namespace

std::vector<PropertyResult> run_property_suites(const VerifyOptions& opts) {
  Cases rng(opts.seed);
  std::vector<PropertyResult> out;
  out.push_back(log_sum_exp_gap(rng, opts.scale));
  out.push_back(contraction(rng, opts.scale, false));
  out.push_back(contraction(rng, opts.scale, true));
  out.push_back(jacobian_structure(rng, opts.scale));
  out.push_back(fixed_point_gap(rng, opts.scale));
  return out;
}

}  // namespace sovi
