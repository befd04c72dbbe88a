// sovi: generate random MDPs, solve them with VI / QVI / SOVI, run the
// error-vs-iteration benchmark, and check the operator property suites.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sovi/bench.hpp"
#include "sovi/generator.hpp"
#include "sovi/kernels.hpp"
#include "sovi/linalg.hpp"
#include "sovi/serialization.hpp"
#include "sovi/solvers.hpp"
#include "sovi/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string kernels = "auto";

  std::size_t states = 10;
  std::size_t actions = 5;
  double gamma = 0.9;
  double reward_low = -1.0;
  double reward_high = 1.0;
  std::uint64_t seed = 0;

  std::size_t runs = 100;
  std::size_t iters = 50;
  std::vector<std::string> algos;
  std::vector<double> ns;
  double tol = 0.0;
  std::size_t threads = 0;
  std::string out;

  std::string mdp_path;
  std::string q0_path;
  double scale = 1.0;
};

sovi::GeneratorConfig generator_config(const Options& o) {
  sovi::GeneratorConfig g;
  g.num_states = o.states;
  g.num_actions = o.actions;
  g.gamma = o.gamma;
  g.seed = o.seed;
  g.reward_low = o.reward_low;
  g.reward_high = o.reward_high;
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return g;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

fs::path output_dir(const std::string& out, const char* fallback) {
  fs::path dir = out.empty() ? fs::path(fallback) : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

int cmd_generate(const Options& o) {
  const auto cfg = generator_config(o);
  const sovi::Mdp m = sovi::random_mdp(cfg);
  if (o.out.empty()) {
    sovi::save_mdp(m, std::cout);
    return 0;
  }
  fs::path target(o.out);
  if (fs::is_directory(target) || o.out.back() == '/') {
    fs::create_directories(target);
    sovi::save_mdp(m, target / "mdp.json");
    sovi::save_qtable(sovi::random_q0(cfg.num_states, cfg.num_actions, cfg.seed),
                      target / "q0.json");
    std::cout << "wrote " << (target / "mdp.json").string() << " and "
              << (target / "q0.json").string() << '\n';
  } else {
    sovi::save_mdp(m, target);
    std::cout << "wrote " << target.string() << '\n';
  }
  return 0;
}

int cmd_solve(const Options& o) {
  if (o.iters < 1) throw UsageError("--iters must be positive");
  if (o.algos.size() != 1) throw UsageError("solve takes exactly one --algo");
  const std::string& algo = o.algos.front();
  if (algo != "vi" && algo != "qvi" && algo != "sovi") {
    throw UsageError("unknown --algo '" + algo + "'");
  }
  if (algo == "sovi" && o.ns.size() != 1) throw UsageError("solve with sovi takes exactly one --N");
  if (algo != "sovi" && !o.ns.empty()) throw UsageError("--N only applies to sovi");

  const sovi::Mdp m = sovi::load_mdp(fs::path(o.mdp_path));
  const sovi::QTable q0 = o.q0_path.empty()
                              ? sovi::random_q0(m.num_states(), m.num_actions(), o.seed)
                              : sovi::load_qtable(fs::path(o.q0_path));

  sovi::Reference ref;
  ref.value = sovi::optimal_value(m);

  sovi::SolverConfig cfg;
  cfg.max_iters = o.iters;
  cfg.tolerance = o.tol;
  sovi::RunTrace trace;
  if (algo == "vi") {
    trace = sovi::value_iteration(m, sovi::value_from_q(q0), cfg, ref);
  } else if (algo == "qvi") {
    trace = sovi::q_value_iteration(m, q0, cfg, ref);
  } else {
    cfg.smoothing = sovi::SmoothingParam(o.ns.front());
    trace = sovi::second_order_value_iteration(m, q0, cfg, ref);
  }

  const fs::path dir = output_dir(o.out, ".");
  std::ostringstream csv;
  csv << "iteration,residual,error_vs_reference,wall_time_ns\n";
  char buf[128];
  for (const auto& rec : trace.iterates) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%lld\n", rec.iteration, rec.residual,
                  rec.error.value_or(0.0), static_cast<long long>(rec.wall_time_ns));
    csv << buf;
  }
  write_text(dir / "trace.csv", csv.str());
  sovi::save_qtable(trace.final_q, dir / "final_q.json");

  const auto& last = trace.iterates.back();
  std::cout << algo << ": " << trace.iterates.size() << " iterations, residual " << last.residual
            << ", error vs optimum " << last.error.value_or(0.0)
            << (trace.converged ? " (converged)" : "") << '\n'
            << "wrote " << (dir / "trace.csv").string() << " and "
            << (dir / "final_q.json").string() << '\n';
  return 0;
}

int cmd_bench(const Options& o) {
  sovi::ExperimentSpec spec;
  spec.runs = o.runs;
  spec.iters = o.iters;
  spec.generator = generator_config(o);
  spec.base_seed = o.seed;
  spec.threads = o.threads;

  std::vector<std::string> algos = o.algos;
  if (algos.empty()) algos = {"vi", "sovi"};
  std::vector<double> ns = o.ns;
  if (ns.empty()) ns = {5, 10, 15, 20, 30, 35};
  bool any_sovi = false;
  for (const auto& a : algos) {
    if (a == "vi") {
      spec.algorithms.push_back(sovi::AlgorithmSpec::vi());
    } else if (a == "qvi") {
      spec.algorithms.push_back(sovi::AlgorithmSpec::qvi());
    } else if (a == "sovi") {
      if (any_sovi) continue;
      any_sovi = true;
      for (double n : ns) spec.algorithms.push_back(sovi::AlgorithmSpec::sovi(n));
    } else {
      throw UsageError("unknown --algo '" + a + "'");
    }
  }
  if (!any_sovi && !o.ns.empty()) throw UsageError("--N only applies to sovi");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  const sovi::ExperimentResult result = sovi::run_experiment(spec);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = output_dir(o.out, "results");
  write_text(dir / "curves.csv", sovi::curve_csv(result));
  write_text(dir / "summary.json", sovi::summary_json(result) + "\n");

  std::printf("%-14s %-24s\n", "algorithm", "final error (mean +- se)");
  for (const auto& r : result.results) {
    std::printf("%-14s %.4f +- %.4f\n", r.algorithm.name.c_str(), r.final_mean_error,
                r.final_stderr);
  }
  std::printf("%zu runs in %.2f s; wrote %s and %s\n", spec.runs, secs,
              (dir / "curves.csv").c_str(), (dir / "summary.json").c_str());
  return 0;
}

int cmd_verify(const Options& o) {
  sovi::VerifyOptions vo;
  vo.seed = o.seed;
  vo.scale = o.scale;
  bool ok = true;
  for (const auto& r : sovi::run_property_suites(vo)) {
    std::printf("%s %-32s %6zu cases  worst margin %.3e%s%s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.cases, r.worst_margin, r.passed ? "" : "  ",
                r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitViolation;
}

void add_mdp_shape(CLI::App* cmd, Options& o) {
  cmd->add_option("--states", o.states, "Number of states")->check(CLI::PositiveNumber);
  cmd->add_option("--actions", o.actions, "Number of actions")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", o.gamma, "Discount factor in [0, 1)");
  cmd->add_option("--reward-low", o.reward_low, "Lower end of the reward range");
  cmd->add_option("--reward-high", o.reward_high, "Upper end of the reward range");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order value iteration toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--kernels", o.kernels, "Kernel ISA: scalar, avx2 or auto")
      ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

  auto* gen = app.add_subcommand("generate", "Write a random MDP as JSON");
  add_mdp_shape(gen, o);
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_option("--out", o.out, "Output file, or directory for mdp.json + q0.json");

  auto* solve = app.add_subcommand("solve", "Run one algorithm on one MDP");
  solve->add_option("--mdp", o.mdp_path, "MDP JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--q0", o.q0_path, "Initial Q-table JSON (default: random integers 10..20)")
      ->check(CLI::ExistingFile);
  solve->add_option("--algo", o.algos, "vi, qvi or sovi")->required();
  solve->add_option("--N", o.ns, "Smoothing parameter for sovi");
  solve->add_option("--iters", o.iters, "Iteration budget")->check(CLI::PositiveNumber);
  solve->add_option("--tol", o.tol, "Stop once the residual is at most this (0: never)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", o.seed, "Seed for the random initial Q-table");
  solve->add_option("--out", o.out, "Output directory for trace.csv and final_q.json");

  auto* bench = app.add_subcommand("bench", "Error-vs-iteration experiment over random MDPs");
  add_mdp_shape(bench, o);
  bench->add_option("--runs", o.runs, "Number of random MDPs")->check(CLI::PositiveNumber);
  bench->add_option("--iters", o.iters, "Iterations per algorithm")->check(CLI::PositiveNumber);
  bench->add_option("--algo", o.algos, "vi, qvi or sovi (repeatable)");
  bench->add_option("--N", o.ns, "Smoothing parameters for sovi (repeatable)");
  bench->add_option("--seed", o.seed, "Base seed; run k uses seed + k");
  bench->add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)");
  bench->add_option("--out", o.out, "Output directory for curves.csv and summary.json");

  auto* verify = app.add_subcommand("verify", "Run the randomized operator property suites");
  verify->add_option("--seed", o.seed, "Seed for the random instances");
  verify->add_option("--scale", o.scale, "Case-count multiplier")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    sovi::kernels::select(sovi::kernels::parse_isa(o.kernels));
    if (*gen) return cmd_generate(o);
    if (*solve) return cmd_solve(o);
    if (*bench) return cmd_bench(o);
    if (*verify) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
