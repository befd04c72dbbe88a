// Acceptance suite: each criterion prints one PASS/FAIL line with its
// measured statistic and runtime. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sovi/bench.hpp"
#include "sovi/generator.hpp"
#include "sovi/linalg.hpp"
#include "sovi/smooth_ops.hpp"
#include "sovi/solvers.hpp"

using namespace sovi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> check;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Mdp make_mdp(std::size_t s, std::size_t a, double gamma, std::uint64_t seed) {
  GeneratorConfig g;
  g.num_states = s;
  g.num_actions = a;
  g.gamma = gamma;
  g.seed = seed;
  return random_mdp(g);
}

SolverConfig config(std::size_t iters, double tol, std::optional<double> n = std::nullopt) {
  SolverConfig cfg;
  cfg.max_iters = iters;
  cfg.tolerance = tol;
  if (n) cfg.smoothing = SmoothingParam(*n);
  return cfg;
}

QTable converged_q_star(const Mdp& m) {
  return q_value_iteration(m, QTable(m.num_states(), m.num_actions()), config(1'000'000, 1e-12))
      .final_q;
}

QTable converged_sovi(const Mdp& m, const QTable& q0, double n) {
  return second_order_value_iteration(m, q0, config(200, 1e-12, n)).final_q;
}

Outcome log_sum_exp_gap() {
  std::mt19937_64 eng(101);
  std::uniform_real_distribution<double> entry(-100.0, 100.0);
  const double ns[] = {1.0, 5.0, 10.0, 35.0};
  double worst_low = 0.0, worst_high = -INFINITY;
  int violations = 0;
  for (int t = 0; t < 10'000; ++t) {
    const std::size_t d = 2 + eng() % 9;
    std::vector<double> x(d);
    for (double& v : x) v = entry(eng);
    const double n = ns[eng() % 4];
    const double gap = log_sum_exp(x, SmoothingParam(n)) - *std::max_element(x.begin(), x.end());
    const double over = gap - std::log(static_cast<double>(d)) / n;
    worst_low = std::min(worst_low, gap);
    worst_high = std::max(worst_high, over);
    if (gap < -1e-12 || over > 1e-12) ++violations;
  }
  return {violations == 0,
          fmt("10000 vectors, min gap %.3g, max (gap - ln d/N) %.3g", worst_low, worst_high)};
}

Outcome smoothed_contraction() {
  std::mt19937_64 eng(202);
  const double gammas[] = {0.5, 0.9, 0.99};
  const double ns[] = {1.0, 5.0, 10.0, 35.0};
  double worst = -INFINITY;
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const double gamma = gammas[t % 3];
    const Mdp m = make_mdp(1 + eng() % 10, 1 + eng() % 5, gamma, eng());
    const QTable p = random_q(m.num_states(), m.num_actions(), -50, 50, eng());
    const QTable q = random_q(m.num_states(), m.num_actions(), -50, 50, eng());
    const SmoothingParam n(ns[eng() % 4]);
    const double slack =
        max_norm_diff(smoothed_U(m, p, n), smoothed_U(m, q, n)) - gamma * max_norm_diff(p, q);
    worst = std::max(worst, slack);
    if (slack > 1e-12) ++violations;
  }
  return {violations == 0, fmt("1000 triples, max(||UP-UQ|| - gamma||P-Q||) = %.3g", worst)};
}

Outcome jacobian_correctness() {
  std::mt19937_64 eng(303);
  double worst_row = 0.0, worst_fd = 0.0, min_entry = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const double gamma = std::vector<double>{0.5, 0.9, 0.99}[t % 3];
    const Mdp m = make_mdp(1 + eng() % 10, 1 + eng() % 5, gamma, eng());
    const QTable q = random_q(m.num_states(), m.num_actions(), -10, 10, eng());
    const SmoothingParam n(0.5 + 9.5 * static_cast<double>(eng() % 1000) / 999.0);
    const JacobianMatrix jac = jacobian_U(m, q, n);
    for (std::size_t r = 0; r < jac.dim(); ++r) {
      double sum = 0.0;
      for (double v : jac.row(r)) {
        min_entry = std::min(min_entry, v);
        sum += v;
      }
      worst_row = std::max(worst_row, std::fabs(sum - gamma));
    }
    constexpr double h = 1e-6;
    QTable x = q;
    for (std::size_t col = 0; col < jac.dim(); ++col) {
      const double orig = x.flat()[col];
      x.flat()[col] = orig + h;
      const QTable up = smoothed_U(m, x, n);
      x.flat()[col] = orig - h;
      const QTable down = smoothed_U(m, x, n);
      x.flat()[col] = orig;
      for (std::size_t r = 0; r < jac.dim(); ++r) {
        const double fd = (up.flat()[r] - down.flat()[r]) / (2 * h);
        worst_fd = std::max(worst_fd, std::fabs(fd - jac(r, col)));
      }
    }
  }
  return {worst_row <= 1e-10 && min_entry >= 0.0 && worst_fd <= 1e-5,
          fmt("max |row sum - gamma| %.3g, min entry %.3g, max |J - FD| %.3g", worst_row,
              min_entry, worst_fd)};
}

Outcome fixed_point_gap() {
  double worst = -INFINITY;
  int violations = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Mdp m = make_mdp(10, 5, 0.9, 4000 + k);
    const QTable q_star = converged_q_star(m);
    const QTable q0 = random_q0(10, 5, 4000 + k);
    for (double n : {5.0, 10.0, 35.0}) {
      const double bound = 0.9 * std::log(5.0) / (n * 0.1);
      const double slack = max_norm_diff(q_star, converged_sovi(m, q0, n)) - bound;
      worst = std::max(worst, slack);
      if (slack > 1e-8) ++violations;
    }
  }
  // Symmetric one-state two-action instance: the bound is attained.
  const Mdp sym(1, 2, {1.0, 1.0}, {1.0, 1.0}, 0.9);
  double tight_err = 0.0;
  for (double n : {5.0, 10.0, 35.0}) {
    const double gap = max_norm_diff(converged_q_star(sym), converged_sovi(sym, QTable(1, 2), n));
    tight_err = std::max(tight_err, std::fabs(gap - 0.9 * std::log(2.0) / (n * 0.1)));
  }
  return {violations == 0 && tight_err <= 1e-9,
          fmt("300 (MDP, N) pairs, max(gap - bound) %.3g; symmetric |gap - bound| %.3g", worst,
              tight_err)};
}

Outcome global_convergence() {
  const Mdp m = make_mdp(10, 5, 0.9, 5150);
  std::vector<QTable> finals;
  for (std::uint64_t s = 0; s < 20; ++s) {
    finals.push_back(converged_sovi(m, random_q(10, 5, -50, 50, 9000 + s), 10.0));
  }
  double spread = 0.0;
  for (const auto& q : finals) spread = std::max(spread, max_norm_diff(q, finals.front()));
  return {spread <= 1e-7, fmt("20 starts in [-50, 50], max pairwise distance %.3g", spread)};
}

Outcome second_order() {
  constexpr double kN = 30.0;
  std::size_t worst_iters = 0;
  double total_iters = 0.0;
  double max_ratio = 0.0;
  std::vector<double> per_instance_max;
  bool finite = true;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Mdp m = make_mdp(10, 5, 0.9, 6000 + k);
    const QTable q0 = random_q0(10, 5, 6000 + k);
    const auto early = second_order_value_iteration(m, q0, config(50, 1e-8, kN));
    const std::size_t iters = early.converged ? early.iterates.size() : 1000;
    worst_iters = std::max(worst_iters, iters);
    total_iters += static_cast<double>(iters);

    Reference ref;
    ref.q = converged_sovi(m, q0, kN);
    const auto trace = second_order_value_iteration(m, q0, config(12, 0.0, kN), ref);
    std::vector<double> e{max_norm_diff(q0, *ref.q)};
    for (const auto& rec : trace.iterates) e.push_back(*rec.error);
    double inst_max = 0.0;
    for (std::size_t n = 0; n + 1 < e.size(); ++n) {
      if (e[n] < 1e-8 || e[n] > 1.0) continue;
      const double ratio = e[n + 1] / (e[n] * e[n]);
      finite = finite && std::isfinite(ratio);
      inst_max = std::max(inst_max, ratio);
    }
    per_instance_max.push_back(inst_max);
    max_ratio = std::max(max_ratio, inst_max);
  }
  // "Stable": no instance's ratio exceeds 10x the median instance maximum.
  std::vector<double> sorted = per_instance_max;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const bool stable = max_ratio <= 10.0 * std::max(median, 1e-3);
  return {worst_iters <= 6 && finite && stable,
          fmt("N=%g: mean %.2f / max %zu iterations to residual 1e-8; e_{n+1}/e_n^2 max %.3g, "
              "median instance max %.3g",
              kN, total_iters / 20.0, worst_iters, max_ratio, median)};
}

Outcome reference_error_curves() {
  ExperimentSpec spec;
  spec.runs = 100;
  spec.iters = 50;
  spec.generator.num_states = 10;
  spec.generator.num_actions = 5;
  spec.generator.gamma = 0.9;
  spec.base_seed = 1;
  const double ns[] = {5, 10, 15, 20, 30, 35};
  const double ref[] = {1.7290, 0.5658, 0.2737, 0.1610, 0.0770, 0.0589};
  const double ref_vi = 0.1017;
  spec.algorithms.push_back(AlgorithmSpec::vi());
  for (double n : ns) spec.algorithms.push_back(AlgorithmSpec::sovi(n));
  const auto result = run_experiment(spec);

  const double vi = result.results[0].final_mean_error;
  bool monotone = true, below_vi = true, within2 = true;
  std::string table = fmt("VI %.4f (ref %.4f)", vi, ref_vi);
  within2 = within2 && vi <= 2 * ref_vi && vi >= ref_vi / 2;
  for (std::size_t k = 0; k < 6; ++k) {
    const double e = result.results[k + 1].final_mean_error;
    table += fmt("; N=%g %.4f (%.4f)", ns[k], e, ref[k]);
    within2 = within2 && e <= 2 * ref[k] && e >= ref[k] / 2;
    if (k > 0 && !(e < result.results[k].final_mean_error)) monotone = false;
    if ((ns[k] == 30 || ns[k] == 35) && !(e < vi)) below_vi = false;
  }
  return {monotone && below_vi && within2,
          fmt("monotone=%d below_vi=%d within_2x=%d: ", monotone, below_vi, within2) + table};
}

Outcome single_action_equivalence() {
  double worst_fix = 0.0, worst_one_step = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Mdp m = make_mdp(1 + k % 10, 1, 0.9, 7000 + k);
    const QTable q0 = random_q0(m.num_states(), 1, 7000 + k);
    const QTable qvi = q_value_iteration(m, q0, config(1'000'000, 1e-13)).final_q;
    Reference ref;
    ref.q = qvi;
    const auto trace = second_order_value_iteration(m, q0, config(5, 0.0, 5.0), ref);
    worst_one_step = std::max(worst_one_step, *trace.iterates[0].error);
    worst_fix = std::max(worst_fix, max_norm_diff(trace.final_q, qvi));
  }
  return {worst_fix <= 1e-9 && worst_one_step <= 1e-9,
          fmt("50 MDPs: after one Newton step max error %.3g, final %.3g", worst_one_step,
              worst_fix)};
}

Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / ("sovi_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::string args =
      " bench --runs 100 --states 10 --actions 5 --gamma 0.9 --iters 50 --algo vi --algo sovi "
      "--N 5 --N 10 --N 15 --N 20 --N 30 --N 35 --seed 1 --out ";
  std::string contents[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / std::to_string(k);
    const std::string cmd = cli + args + out.string() + " >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "bench command failed: " + cmd};
    }
    std::ifstream in(out / "curves.csv", std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    contents[k] = os.str();
  }
  fs::remove_all(dir);
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return {same, fmt("two CLI runs, %zu bytes each, identical=%d", contents[0].size(), same)};
}

}  // namespace

int main() {
  const std::string cli = SOVI_CLI_PATH;
  const std::vector<Criterion> criteria = {
      {"log_sum_exp_gap", 1.0, log_sum_exp_gap},
      {"smoothed_contraction", 5.0, smoothed_contraction},
      {"jacobian_correctness", 10.0, jacobian_correctness},
      {"fixed_point_gap", 30.0, fixed_point_gap},
      {"global_convergence", 5.0, global_convergence},
      {"second_order_behavior", 0.0, second_order},
      {"reference_error_curves", 120.0, reference_error_curves},
      {"single_action_equivalence", 0.0, single_action_equivalence},
      {"bench_determinism", 0.0, [&] { return determinism(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s <= 0.0 || secs < c.time_limit_s;
    const bool passed = out.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("[%s] %-34s %7.3fs%s  %s\n", passed ? "PASS" : "FAIL", c.name.c_str(), secs,
                in_time ? "" : " (over time limit)", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures;
}
