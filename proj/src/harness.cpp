#include "bifluid/harness.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace bifluid {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LimitState make_limit_ic(const Grid& g, const FluidParams& params,
                         const WellPreparedSpec& spec) {
  LimitState s(g, params.rho_plus_limit(), params.rho_minus_limit());
  const double lo = spec.alpha_mean - std::abs(spec.alpha_contrast);
  const double hi = spec.alpha_mean + std::abs(spec.alpha_contrast);
  if (!(lo > 0.0) || !(hi < 1.0))
    throw std::invalid_argument(
        "make_limit_ic: fraction profile leaves (0, 1)");

  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      const double x = g.center(0, i) / g.length(0);
      const double sx = std::sin(kTwoPi * x);
      if (g.dim() == 1) {
        s.alpha_plus.at(i, j) = spec.alpha_mean + spec.alpha_contrast * sx;
        s.u.comp(0).at(i, j) = 0.0;  // 1D limit velocity vanishes
      } else {
        const double y = g.center(1, j) / g.length(1);
        const double sy = std::sin(kTwoPi * y);
        const double cx = std::cos(kTwoPi * x);
        const double cy = std::cos(kTwoPi * y);
        s.alpha_plus.at(i, j) = spec.alpha_mean + spec.alpha_contrast * sx * sy;
        s.u.comp(0).at(i, j) = spec.velocity_amplitude * sx * cy;
        s.u.comp(1).at(i, j) = -spec.velocity_amplitude * cx * sy;
      }
    }
  return s;
}

ConservedField make_well_prepared(const LimitState& lim0,
                                  const FluidParams& params, PrepMode mode,
                                  const WellPreparedSpec& spec, double floor) {
  const Grid& g = lim0.alpha_plus.grid();
  ConservedField out(g);

  const ScalarField rp = lim0.r_plus();
  const ScalarField rm = lim0.r_minus();
  for (std::size_t k = 0; k < out.r_plus.size(); ++k) {
    out.r_plus[k] = rp[k];
    out.r_minus[k] = rm[k];
  }

  if (mode == PrepMode::quadratic) {
    // balanced square profile: +amp on the left half, -amp on the right
    if (g.n(0) % 2 != 0)
      throw std::invalid_argument(
          "make_well_prepared: quadratic mode needs an even cell count");
    const double amp =
        params.eps * params.eps * spec.perturb_amplitude;
    for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
      for (int i = 0; i < g.n(0); ++i)
        out.r_plus.at(i, j) += (i < g.n(0) / 2 ? amp : -amp);
  }

  for (std::size_t k = 0; k < out.r_plus.size(); ++k)
    if (out.r_plus[k] < floor || out.r_minus[k] < floor)
      throw std::invalid_argument(
          "make_well_prepared: perturbation drives a density below the floor");

  for (std::size_t k = 0; k < out.r_plus.size(); ++k) {
    const double rho = out.r_plus[k] + out.r_minus[k];
    for (int d = 0; d < g.dim(); ++d)
      out.m.comp(d)[k] = rho * lim0.u.comp(d)[k];
  }
  return out;
}

namespace {

// least-squares slope of ln(y) against ln(x) over positive pairs
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepRow summarize(double eps, const RunResult& run, double seconds) {
  SweepRow row;
  row.eps = eps;
  row.aborted = run.aborted;
  row.steps = run.steps;
  row.seconds = seconds;
  row.int_div_l2_sq = run.int_div_l2_sq;
  row.int_du_l2_sq = run.int_du_l2_sq;
  for (const DiagnosticRow& r : run.rows) {
    row.sup_e1 = std::max(row.sup_e1, r.e1);
    row.sup_e2 = std::max(row.sup_e2, r.e2);
    row.sup_drp_l1 = std::max(row.sup_drp_l1, r.drp_l1);
    row.sup_drm_l1 = std::max(row.sup_drm_l1, r.drm_l1);
    row.sup_drp_l2 = std::max(row.sup_drp_l2, r.drp_l2);
    row.sup_drm_l2 = std::max(row.sup_drm_l2, r.drm_l2);
    row.max_l2l1_ratio = std::max(row.max_l2l1_ratio, r.l2l1_ratio);
    row.ckp_all_ok = row.ckp_all_ok && r.ckp_ok;
  }
  return row;
}

}  // namespace

SweepReport mach_sweep(const LimitState& lim0,
                       const std::vector<double>& eps_list,
                       const FluidParams& base, const SolverConfig& scfg,
                       const LimitConfig& lcfg, int threads) {
  if (eps_list.size() < 3)
    throw std::invalid_argument("mach_sweep: need at least three eps values");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1]))
      throw std::invalid_argument("mach_sweep: eps must be strictly decreasing");

  LimitConfig lim_cfg = lcfg;
  lim_cfg.t_end = scfg.t_end;
  if (scfg.diag_dt > 0.0 && (lim_cfg.snapshot_dt <= 0.0 ||
                             lim_cfg.snapshot_dt > scfg.diag_dt))
    lim_cfg.snapshot_dt = scfg.diag_dt;

  SweepReport report(run_limit(lim0, base, lim_cfg));
  const LimitState lim_start = report.limit.trajectory.states.front();

  const int n_runs = static_cast<int>(eps_list.size());
  report.rows.resize(n_runs);
  std::vector<RunResult> runs(n_runs, RunResult(lim0.alpha_plus.grid()));

  auto one_run = [&](int k) {
    const double eps = eps_list[k];
    const FluidParams params = base.with_eps(eps);
    const ConservedField ic = make_well_prepared(
        lim_start, params, PrepMode::exact, WellPreparedSpec{}, scfg.floor);
    const auto start = std::chrono::steady_clock::now();
    runs[k] = run(ic, params, scfg, &report.limit.trajectory);
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - start;
    report.rows[k] = summarize(eps, runs[k], dt.count());
  };

  if (threads <= 1) {
    for (int k = 0; k < n_runs; ++k) one_run(k);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    const int width = std::min(threads, n_runs);
    std::mutex mtx;
    for (int w = 0; w < width; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t k;
          {
            std::lock_guard<std::mutex> lock(mtx);
            if (next >= eps_list.size()) return;
            k = next++;
          }
          one_run(static_cast<int>(k));
        }
      });
    for (std::thread& th : pool) th.join();
  }

  report.runs = std::move(runs);
  for (const SweepRow& row : report.rows)
    if (row.aborted) report.partial = true;

  std::vector<double> e1s, dus;
  for (const SweepRow& row : report.rows) {
    e1s.push_back(row.sup_e1);
    dus.push_back(row.int_du_l2_sq);
  }
  report.slope_e1 = loglog_slope(eps_list, e1s);
  report.slope_du = loglog_slope(eps_list, dus);
  return report;
}

namespace {

// well-separated two-phase box used by the randomized checks
const FluidParams& check_params() {
  static const FluidParams p(4.0, 2.0, 1e-2, 0.0, 0.5, 2.0);
  return p;
}

}  // namespace

InequalityReport verify_inequalities(std::uint64_t seed, long trials) {
  InequalityReport rep;
  rep.trials = trials;
  if (trials == 0) {
    rep.vacuous = true;
    return rep;
  }
  if (trials < 0)
    throw std::invalid_argument("verify_inequalities: negative trial count");

  std::mt19937_64 rng(seed);

  // CKP variants over randomized equal-mass pairs
  {
    const Grid g = Grid::make_1d(128, 1.0, Boundary::periodic);
    std::uniform_real_distribution<double> logv(std::log(1e-2), std::log(1e2));
    for (long tr = 0; tr < trials; ++tr) {
      ScalarField f(g), gg(g);
      for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = std::exp(logv(rng));
        gg[k] = std::exp(logv(rng));
      }
      const double scale = integrate(gg) / integrate(f);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] *= scale;
      const CkpReport ck = ckp_check(f, gg);
      if (!ck.factor1_holds) ++rep.ckp_factor1_failures;
      if (!ck.factor2_ok) ++rep.ckp_factor2_failures;
      if (!ck.factor3_ok) ++rep.ckp_factor3_failures;
    }
  }

  // pinned counterexample: f = 2 on [0, 1/2), g = 1
  {
    const Grid g = Grid::make_1d(128, 1.0, Boundary::periodic);
    ScalarField f(g), gg(g, 1.0);
    for (int i = 0; i < g.n(0); ++i) f.at(i) = i < g.n(0) / 2 ? 2.0 : 0.0;
    const CkpReport ck = ckp_check(f, gg);
    rep.counterexample_l1 = ck.l1_diff;
    rep.counterexample_entropy = ck.entropy;
    rep.counterexample_factor1_fails = !ck.factor1_holds;
    rep.counterexample_factor2_holds = ck.factor2_ok;
  }

  // sandwich constants over a dense sample box
  {
    std::vector<double> rhos;
    for (int k = 0; k <= 512; ++k) rhos.push_back(4.0 * k / 512.0);
    rep.sandwich_ok = true;
    rep.sandwich_c1 = 1e300;
    for (double gamma : {2.0, 3.0, 4.0}) {
      const SandwichReport sw = sandwich_check(rhos, 0.5, 2.0, gamma);
      rep.sandwich_ok = rep.sandwich_ok && sw.violations == 0 && sw.c1 > 0.0 &&
                        std::isfinite(sw.c2);
      rep.sandwich_c1 = std::min(rep.sandwich_c1, sw.c1);
      rep.sandwich_c2 = std::max(rep.sandwich_c2, sw.c2);
    }
  }

  // Lipschitz probe against the implicit-derivative bound
  {
    rep.lipschitz_ok = true;
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
      const LipschitzReport lp = lipschitz_probe(gamma, 1e-2, 1e2, 2000);
      if (!(lp.max_ratio <= lp.bound_max * 1.05)) rep.lipschitz_ok = false;
    }
  }

  // fraction stability: |alpha^eps - alpha| against fractional-mass
  // differences, bounded by probe Lipschitz constant times mean-value factors
  {
    const FluidParams& par = check_params();
    const double gamma = par.gamma_plus / par.gamma_minus;
    const double r_lo = 0.3 * 0.8, r_hi = 2.0 * 1.2;
    const double d_lo = r_lo / std::pow(r_hi, gamma);
    const double d_hi = r_hi / std::pow(r_lo, gamma);
    const LipschitzReport lp = lipschitz_probe(gamma, d_lo, d_hi, 4000);
    const double c_mvt = std::max(
        1.0 / std::pow(r_lo, gamma),
        gamma * r_hi / std::pow(r_lo, gamma + 1.0));
    rep.alpha_stability_bound = lp.bound_max * c_mvt * 1.05;  // sampling slack

    std::uniform_real_distribution<double> base(0.3, 2.0);
    std::uniform_real_distribution<double> rel(-0.2, 0.2);
    const double m[2] = {0.0, 0.0};
    for (long tr = 0; tr < trials; ++tr) {
      const double rp0 = base(rng), rm0 = base(rng);
      const double rp1 = rp0 * (1.0 + rel(rng));
      const double rm1 = rm0 * (1.0 + rel(rng));
      const double a0 = reconstruct(rp0, rm0, m, 1, par).alpha_plus;
      const double a1 = reconstruct(rp1, rm1, m, 1, par).alpha_plus;
      const double denom = std::abs(rp1 - rp0) + std::abs(rm1 - rm0);
      if (denom == 0.0) continue;
      rep.alpha_stability_max_ratio =
          std::max(rep.alpha_stability_max_ratio, std::abs(a1 - a0) / denom);
    }
    rep.alpha_stability_ok = rep.alpha_stability_max_ratio <= rep.alpha_stability_bound;
  }

  // frozen L2-by-L1 constant against fresh randomized states
  {
    const FluidParams& par = check_params();
    const Grid g = Grid::make_2d(16, 16, 1.0, 1.0);
    std::uniform_real_distribution<double> ua(0.2, 0.8);
    std::uniform_real_distribution<double> du(-0.5, 0.5);
    std::uniform_real_distribution<double> drho(-0.3, 0.3);
    const long reps = std::min<long>(trials, 2000);
    rep.l2l1_ok = true;
    for (long tr = 0; tr < reps; ++tr) {
      LimitState lim(g, par.rho_plus_limit(), par.rho_minus_limit());
      PrimitiveField comp(g);
      for (std::size_t k = 0; k < g.cells(); ++k) {
        lim.alpha_plus[k] = ua(rng);
        lim.u.comp(0)[k] = du(rng);
        lim.u.comp(1)[k] = du(rng);
        const double ap = std::clamp(lim.alpha_plus[k] + 0.3 * drho(rng),
                                     0.05, 0.95);
        const double rp = lim.rho_plus * (1.0 + drho(rng));
        comp.alpha_plus[k] = ap;
        comp.rho_plus[k] = rp;
        comp.rho_minus[k] =
            companion_density(rp, par.gamma_plus, par.gamma_minus);
        comp.rho[k] = ap * rp + (1.0 - ap) * comp.rho_minus[k];
        comp.u.comp(0)[k] = lim.u.comp(0)[k] + du(rng);
        comp.u.comp(1)[k] = lim.u.comp(1)[k] + du(rng);
      }
      const L2ByL1Report l21 = l2_by_l1_check(comp, lim, par);
      rep.l2l1_max_ratio = std::max(rep.l2l1_max_ratio, l21.ratio);
      rep.l2l1_ok = rep.l2l1_ok && l21.ok;
    }
  }

  return rep;
}

}  // namespace bifluid
