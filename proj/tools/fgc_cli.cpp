// fgc: entropic GW / FGW solves, benchmarks and self-checks from the shell.
//
//   fgc gw --random 1d --n 500 --mode both --seed 7
//   fgc fgw --source a.csv --target b.csv --cost c.csv --theta 0.5 --plan-out plan.csv
//   fgc bench --task random1d --sizes 250,500,1000 --reps 5 --modes fast,naive
//   fgc verify --k 3 --n 512
//
// Exit codes: 0 success, 1 input/config error (JSON on stdout), 2 failed verification.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgc/error.hpp"
#include "fgc/experiments.hpp"
#include "fgc/io.hpp"
#include "fgc/sinkhorn.hpp"
#include "fgc/solver.hpp"
#include "fgc/verify.hpp"
#include "run_config.hpp"

using nlohmann::json;
using namespace fgc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path);
  out << text;
}

struct Run {
  SolveResult result;
  MirrorDescentTrace trace;
  double seconds = 0.0;
};

Run solve(const Problem& p, SolverConfig cfg, GradientMode mode, bool fused) {
  cfg.mode = mode;
  Run r;
  const auto t0 = Clock::now();
  r.result = fused ? entropic_fgw(p.source, p.target, *p.cost, cfg, &r.trace)
                   : entropic_gw(p.source, p.target, cfg, &r.trace);
  r.seconds = seconds_since(t0);
  return r;
}

json run_summary(const Run& r) {
  double grad = 0.0, sk = 0.0;
  int sweeps = 0;
  for (const auto& rec : r.trace.records) {
    grad += rec.gradient_seconds;
    sk += rec.sinkhorn_seconds;
    sweeps += rec.sinkhorn_iterations;
  }
  return {{"gw_objective", r.result.gw_objective},
          {"entropic_objective", r.result.entropic_objective},
          {"iterations", r.result.iterations_used},
          {"sinkhorn_sweeps", sweeps},
          {"marginal_violation", r.result.marginal_violation},
          {"converged", r.result.converged},
          {"timings", {{"total_s", r.seconds},
                       {"setup_s", r.trace.setup_seconds},
                       {"gradient_s", grad},
                       {"sinkhorn_s", sk}}}};
}

void write_plan(const cli::RunConfig& c, const Matrix& plan) {
  if (c.plan_out.empty()) return;
  const bool dense = c.plan_format == "dense" ||
                     (c.plan_format == "auto" && std::max(plan.rows(), plan.cols()) <= 1000);
  if (dense)
    io::write_matrix_csv(c.plan_out, plan);
  else
    io::write_plan_triplets(c.plan_out, plan, c.threshold);
}

int cmd_solve(const cli::RunConfig& c) {
  cli::validate(c);
  const bool fused = c.command == "fgw";
  const Problem p = cli::load_problem(c);
  const SolverConfig cfg = cli::solver_config(c);

  std::optional<Run> fast, naive;
  if (c.mode != "naive") fast = solve(p, cfg, GradientMode::fast, fused);
  if (c.mode != "fast") naive = solve(p, cfg, GradientMode::naive, fused);
  const Run& main = fast ? *fast : *naive;

  json out = run_summary(main);
  out["mode"] = c.mode;
  out["M"] = p.source.size();
  out["N"] = p.target.size();
  if (fast && naive) {
    out["naive"] = run_summary(*naive);
    out["plan_diff_fro"] = plan_discrepancy(fast->result.plan.values, naive->result.plan.values);
    out["speedup"] = naive->seconds / fast->seconds;
  }
  if (c.check_theta_zero) {
    // At theta = 0 FGW reduces to one entropic OT problem on C (x) C.
    cli::RunConfig zero = c;
    zero.theta = 0.0;
    const Run r0 = solve(p, cli::solver_config(zero), GradientMode::fast, true);
    Matrix c2 = p.cost->values;
    for (double& x : c2.values()) x *= x;
    SinkhornOptions so{cfg.epsilon, cfg.sinkhorn_max_iterations, cfg.sinkhorn_tolerance,
                       cfg.log_domain};
    const auto ot = sinkhorn(c2, p.source, p.target, so);
    const double diff = frobenius_diff(r0.result.plan.values, ot.plan.values);
    out["theta0_check"] = {{"plan_diff_fro", diff}, {"passed", diff <= 1e-12}};
    if (diff > 1e-12) {
      out["config"] = cli::to_json(c);
      emit(out, c.json_out);
      std::cerr << "theta = 0 check failed: |P - P_ot|_F = " << diff << "\n";
      return 2;
    }
  }
  out["config"] = cli::to_json(c);
  write_plan(c, main.result.plan.values);
  emit(out, c.json_out);
  return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size() || v == 0) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigInvalid, "bad size '" + tok + "' in --sizes");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic Gromov-Wasserstein with exact O(N^2) gradients on uniform grids"};
  app.require_subcommand(1);

  cli::RunConfig rc;
  auto add_solver_flags = [&](CLI::App* s, bool fused) {
    s->add_option("--random", rc.random, "random instance: 1d or 2d");
    s->add_option("--n", rc.n, "1D grid size");
    s->add_option("--side", rc.side, "2D grid side (and image resampling side)");
    s->add_option("--spacing", rc.spacing, "grid spacing (default 1/(points per axis - 1))");
    s->add_option("--k", rc.power, "distance power");
    s->add_option("--source", rc.source, "source measure CSV");
    s->add_option("--target", rc.target, "target measure CSV");
    s->add_option("--dim", rc.dim, "grid of file measures: 1d or 2d");
    s->add_option("--eps", rc.epsilon, "entropic regularization");
    s->add_option("--tau", rc.tau, "proximal step (default eps)");
    s->add_option("--iters", rc.iterations, "outer mirror-descent iterations");
    s->add_option("--sinkhorn-iters", rc.sinkhorn_iterations, "Sinkhorn sweep cap");
    s->add_option("--tol", rc.tolerance, "Sinkhorn marginal tolerance");
    s->add_flag("!--no-log-domain", rc.log_domain, "plain Sinkhorn scaling");
    s->add_option("--mode", rc.mode, "fast | naive | both");
    s->add_option("--exec", rc.execution, "serial | parallel gradient kernels");
    s->add_option("--seed", rc.seed, "seed for random instances");
    s->add_option("--plan-out", rc.plan_out, "write the plan here");
    s->add_option("--plan-format", rc.plan_format, "auto | dense | triplets");
    s->add_option("--threshold", rc.threshold, "drop triplet entries below this");
    s->add_option("--json-out", rc.json_out, "result JSON path (default stdout)");
    if (fused) {
      s->add_option("--theta", rc.theta, "weight of the GW term");
      s->add_option("--cost", rc.cost, "feature cost CSV (default: coordinate distance)");
      s->add_option("--image-a", rc.image_a, "source image (PGM or CSV)");
      s->add_option("--image-b", rc.image_b, "target image (PGM or CSV)");
      s->add_flag("--check-theta0", rc.check_theta_zero,
                  "also check that theta = 0 matches plain Sinkhorn on C*C");
    }
  };
  auto* gw = app.add_subcommand("gw", "entropic Gromov-Wasserstein");
  add_solver_flags(gw, false);
  auto* fgw = app.add_subcommand("fgw", "entropic fused Gromov-Wasserstein");
  add_solver_flags(fgw, true);

  BenchOptions bo;
  std::string task = "random1d", sizes, modes = "both", bench_json, bench_csv, image_a, image_b;
  std::optional<std::size_t> bench_side;
  bool no_warmup = false;
  auto* bench = app.add_subcommand("bench", "timing runs, fast vs naive gradients");
  bench->add_option("--task", task, "random1d | random2d | timeseries | digits | horse");
  bench->add_option("--sizes", sizes, "comma-separated N (or sides for 2D tasks)");
  bench->add_option("--side", bench_side, "single side for 2D tasks");
  bench->add_option("--reps", bo.repetitions, "repetitions per size");
  bench->add_option("--modes", modes, "fast | naive | both | fast,naive");
  bench->add_flag("--fgw", bo.fused, "FGW instead of GW on random tasks");
  std::optional<double> bench_eps;
  bench->add_option("--eps", bench_eps, "regularization (default depends on the task)");
  bench->add_option("--tau", bo.solver.tau);
  bench->add_option("--theta", bo.solver.theta);
  bench->add_option("--iters", bo.solver.outer_iterations);
  bench->add_option("--seed", bo.seed);
  bench->add_option("--transform", bo.transform, "digits: translation | rotation | reflection");
  bench->add_option("--image-a", image_a);
  bench->add_option("--image-b", image_b);
  bench->add_flag("--no-warmup", no_warmup);
  bench->add_option("--json-out", bench_json);
  bench->add_option("--csv-out", bench_csv);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "oracle and invariant checks");
  verify->add_option("--k", vo.k, "largest power");
  verify->add_option("--n", vo.n, "largest 1D size");
  verify->add_option("--side", vo.side, "largest 2D side");
  verify->add_option("--trials", vo.trials);
  verify->add_option("--seed", vo.seed);
  verify->add_flag("--inject-fault", vo.inject_fault, "perturb a binomial coefficient (test hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << json{{"error", "ConfigInvalid"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }

  try {
    if (*gw || *fgw) {
      rc.command = *gw ? "gw" : "fgw";
      return cmd_solve(rc);
    }
    if (*bench) {
      const auto t = parse_task(task);
      if (!t) throw Error(ErrorCode::ConfigInvalid, "unknown task '" + task + "'");
      bo.task = *t;
      bo.solver.epsilon = bench_eps.value_or(default_epsilon(bo.task));
      if (!sizes.empty()) bo.sizes = parse_sizes(sizes);
      if (bench_side) bo.sizes.push_back(*bench_side);
      if (bo.sizes.empty()) throw Error(ErrorCode::ConfigInvalid, "give --sizes or --side");
      bo.run_fast = modes != "naive";
      bo.run_naive = modes != "fast";
      if (modes != "fast" && modes != "naive" && modes != "both" && modes != "fast,naive" &&
          modes != "naive,fast")
        throw Error(ErrorCode::ConfigInvalid, "bad --modes '" + modes + "'");
      bo.warmup = !no_warmup;
      if (!image_a.empty()) bo.image_a = image_a;
      if (!image_b.empty()) bo.image_b = image_b;
      bo.solver.execution = Execution::serial;
      bo.solver.validate();
      const BenchReport report = run_benchmark(bo);
      std::cout << bench_report_table(report);
      if (!bench_json.empty()) {
        std::ofstream(bench_json) << bench_report_json(report, bo) << "\n";
      }
      if (!bench_csv.empty()) std::ofstream(bench_csv) << bench_report_csv(report);
      return 0;
    }
    if (*verify) {
      const VerifyReport report = run_verify(vo);
      std::cout << format_ledger(report);
      if (report.all_passed()) return 0;
      std::cerr << "verification failed:";
      for (const auto& name : report.failed()) std::cerr << ' ' << name;
      std::cerr << '\n';
      return 2;
    }
  } catch (const Error& e) {
    std::cout << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
