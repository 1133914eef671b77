#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bifluid/closure.hpp"
#include "bifluid/compressible.hpp"
#include "bifluid/config.hpp"
#include "bifluid/harness.hpp"
#include "bifluid/incompressible.hpp"
#include "bifluid/io.hpp"

namespace {

using namespace bifluid;

std::string format_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  return buf;
}

Setup load_setup(const std::string& config_path) {
  if (config_path.empty()) return parse_setup(Config{});
  return parse_setup(Config::load(config_path));
}

int cmd_simulate_compressible(const Setup& setup, const std::string& out_dir) {
  const LimitState lim0 = make_limit_ic(setup.grid, setup.params, setup.ic);
  const ConservedField init = make_well_prepared(
      lim0, setup.params, setup.mode, setup.ic, setup.solver.floor);

  LimitConfig lcfg = setup.limit;
  lcfg.snapshot_dt = std::min(lcfg.snapshot_dt, setup.solver.diag_dt);
  const bool with_limit = setup.grid.dim() == 2;
  LimitTrajectory traj;
  if (with_limit) traj = run_limit(lim0, setup.params, lcfg).trajectory;

  const RunResult result = run(init, setup.params, setup.solver,
                               with_limit ? &traj : nullptr);

  const std::string dir = ensure_dir(out_dir);
  write_entropy_csv(dir + "/entropy_" + format_eps(setup.params.eps) + ".csv",
                    result.rows);
  write_snapshot(dir + "/final_state.csv", result.final_state, setup.params);

  nlohmann::json summary;
  summary["command"] = "simulate-compressible";
  summary["grid"] = describe(setup.grid);
  summary["params"] = describe(setup.params);
  summary["run"] = describe(result);
  write_json(dir + "/summary.json", summary);

  if (result.aborted) {
    std::cerr << "run aborted: " << result.abort_reason << "\n";
    return 1;
  }
  std::cout << "steps " << result.steps << ", final E1 "
            << (result.rows.empty() ? 0.0 : result.rows.back().e1) << "\n";
  return 0;
}

int cmd_simulate_limit(const Setup& setup, const std::string& out_dir) {
  const LimitState lim0 = make_limit_ic(setup.grid, setup.params, setup.ic);
  const LimitRunResult result = run_limit(lim0, setup.params, setup.limit);

  const std::string dir = ensure_dir(out_dir);
  const auto& traj = result.trajectory;
  if (setup.snapshot_times.empty()) {
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "/limit_%05zu.csv", k);
      write_limit_snapshot(dir + name, traj.states[k], setup.params);
    }
  } else {
    for (std::size_t k = 0; k < setup.snapshot_times.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "/limit_%05zu.csv", k);
      write_limit_snapshot(dir + name, traj.at(setup.snapshot_times[k]),
                           setup.params);
    }
  }

  nlohmann::json summary;
  summary["command"] = "simulate-limit";
  summary["grid"] = describe(setup.grid);
  summary["params"] = describe(setup.params);
  summary["run"] = describe(result);
  write_json(dir + "/summary.json", summary);

  std::cout << "steps " << result.steps << ", kinetic energy "
            << result.ke_initial << " -> " << result.ke_final
            << (result.ke_monotone ? " (monotone)" : " (NOT monotone)")
            << "\n";
  return result.ke_monotone ? 0 : 1;
}

int cmd_sweep(const Setup& setup, const std::string& out_dir, int threads) {
  const LimitState lim0 = make_limit_ic(setup.grid, setup.params, setup.ic);
  const SweepReport report = mach_sweep(lim0, setup.eps_list, setup.params,
                                        setup.solver, setup.limit, threads);

  const std::string dir = ensure_dir(out_dir);
  write_sweep_csv(dir + "/sweep.csv", report);
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    write_entropy_csv(
        dir + "/entropy_" + format_eps(report.rows[k].eps) + ".csv",
        report.runs[k].rows);
  }

  nlohmann::json summary;
  summary["command"] = "sweep";
  summary["grid"] = describe(setup.grid);
  summary["params"] = describe(setup.params);
  summary["sweep"] = describe(report);
  write_json(dir + "/summary.json", summary);

  for (const SweepRow& r : report.rows) {
    std::cout << "eps " << r.eps << ": sup E1 " << r.sup_e1 << ", steps "
              << r.steps << (r.aborted ? " (aborted)" : "") << "\n";
  }
  std::cout << "log-log slope of sup E1: " << report.slope_e1 << "\n";
  return report.partial ? 1 : 0;
}

int cmd_verify(std::uint64_t seed, long trials, const std::string& out_dir) {
  const InequalityReport report = verify_inequalities(seed, trials);
  const std::string dir = ensure_dir(out_dir);
  write_json(dir + "/summary.json",
             nlohmann::json{{"command", "verify-inequalities"},
                            {"seed", seed},
                            {"report", describe(report)}});

  std::cout << "trials " << report.trials << (report.vacuous ? " (vacuous)" : "")
            << "\n"
            << "ckp factor-2 failures " << report.ckp_factor2_failures
            << ", factor-3 failures " << report.ckp_factor3_failures << "\n"
            << "counterexample: factor-1 "
            << (report.counterexample_factor1_fails ? "fails" : "HOLDS?")
            << ", factor-2 "
            << (report.counterexample_factor2_holds ? "holds" : "FAILS")
            << "\n"
            << "sandwich " << (report.sandwich_ok ? "ok" : "FAILED")
            << ", lipschitz " << (report.lipschitz_ok ? "ok" : "FAILED")
            << ", fraction stability "
            << (report.alpha_stability_ok ? "ok" : "FAILED") << " ("
            << report.alpha_stability_max_ratio << " vs "
            << report.alpha_stability_bound << ")\n"
            << "l2-by-l1 max ratio " << report.l2l1_max_ratio << " "
            << (report.l2l1_ok ? "ok" : "FAILED") << "\n"
            << (report.all_ok() ? "ALL OK" : "FAILURES PRESENT") << "\n";
  return report.all_ok() ? 0 : 1;
}

int cmd_closure_solve(double r_plus, double r_minus, const FluidParams& params) {
  const double m[2] = {0.0, 0.0};
  const PrimitiveState ps = reconstruct(r_plus, r_minus, m, 2, params);
  std::cout << "alpha_plus " << ps.alpha_plus << "\n"
            << "alpha_minus " << ps.alpha_minus << "\n"
            << "rho_plus " << ps.rho_plus << "\n"
            << "rho_minus " << ps.rho_minus << "\n"
            << "pressure " << ps.p << "\n"
            << "pressure mismatch "
            << std::abs(std::pow(ps.rho_plus, params.gamma_plus) -
                        std::pow(ps.rho_minus, params.gamma_minus))
            << "\n";
  return 0;
}

int cmd_dump(const Setup& setup, const std::string& out_dir) {
  const LimitState lim0 = make_limit_ic(setup.grid, setup.params, setup.ic);
  const ConservedField init = make_well_prepared(
      lim0, setup.params, setup.mode, setup.ic, setup.solver.floor);
  const std::string dir = ensure_dir(out_dir);
  write_limit_snapshot(dir + "/limit_ic.csv", lim0, setup.params);
  write_snapshot(dir + "/compressible_ic.csv", init, setup.params);

  const PrimitiveField prim = reconstruct_field(init, setup.params);
  write_json(dir + "/summary.json",
             nlohmann::json{{"command", "dump"},
                            {"grid", describe(setup.grid)},
                            {"params", describe(setup.params)},
                            {"e1_initial", e1(prim, lim0, setup.params)},
                            {"e2_initial", e2(init.r_plus, init.r_minus,
                                              lim0.r_plus(), lim0.r_minus())},
                            {"energy_initial", energy(prim, setup.params)}});
  std::cout << "wrote " << dir << "/limit_ic.csv and " << dir
            << "/compressible_ic.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-phase low-Mach laboratory: compressible bi-fluid runs, the "
      "incompressible limit, entropy diagnostics and inequality checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 20260814;
  int threads = 1;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--seed", seed, "RNG seed for randomized checks");
  app.add_option("--out", out_dir,
                 "output directory (defaults to the config [output] dir)");
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);

  auto* sim_c = app.add_subcommand("simulate-compressible",
                                   "run the eps-scaled two-phase system");
  auto* sim_l = app.add_subcommand("simulate-limit",
                                   "run the incompressible limit system");
  auto* sweep = app.add_subcommand("sweep", "entropy decay across an eps list");
  auto* verify = app.add_subcommand("verify-inequalities",
                                    "randomized functional-inequality checks");
  long trials = 10000;
  verify->add_option("--trials", trials, "number of randomized trials")
      ->check(CLI::NonNegativeNumber);

  auto* solve = app.add_subcommand("closure-solve",
                                   "recover primitives from fractional masses");
  double r_plus = 1.0, r_minus = 1.0;
  solve->add_option("--r-plus", r_plus, "fractional mass of phase +")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--r-minus", r_minus, "fractional mass of phase -")
      ->check(CLI::NonNegativeNumber);

  auto* dump = app.add_subcommand("dump", "write initial data snapshots");

  CLI11_PARSE(app, argc, argv);

  try {
    const bifluid::Setup setup = load_setup(config_path);
    const std::string dir = out_dir.empty() ? setup.out_dir : out_dir;
    if (sim_c->parsed()) return cmd_simulate_compressible(setup, dir);
    if (sim_l->parsed()) return cmd_simulate_limit(setup, dir);
    if (sweep->parsed()) return cmd_sweep(setup, dir, threads);
    if (verify->parsed()) return cmd_verify(seed, trials, dir);
    if (solve->parsed()) return cmd_closure_solve(r_plus, r_minus, setup.params);
    if (dump->parsed()) return cmd_dump(setup, dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
