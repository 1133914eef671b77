#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bifluid/compressible.hpp"
#include "bifluid/ops.hpp"

using namespace bifluid;

namespace {

constexpr double kPi = 3.14159265358979323846;

const FluidParams kParams(4.0, 2.0, 1e-2, 0.0, 0.1, 1.0);

ConservedField uniform_state(const Grid& g, double rp, double rm) {
  ConservedField s(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    s.r_plus[k] = rp;
    s.r_minus[k] = rm;
  }
  return s;
}

double total(const ScalarField& f) { return integrate(f); }

double pressure_of(double rp, double rm, const FluidParams& par) {
  const double m[2] = {0.0, 0.0};
  return reconstruct(rp, rm, m, 1, par).p;
}

// Linearized mixture sound speed via finite differences of the closure
// pressure: c = sqrt((R+ dp/dR+ + R- dp/dR-) / rho) / eps.
double predicted_speed(double rp, double rm, const FluidParams& par) {
  const double d = 1e-6;
  const double dpp = (pressure_of(rp + d, rm, par) -
                      pressure_of(rp - d, rm, par)) / (2.0 * d);
  const double dpm = (pressure_of(rp, rm + d, par) -
                      pressure_of(rp, rm - d, par)) / (2.0 * d);
  return std::sqrt((rp * dpp + rm * dpm) / (rp + rm)) / par.eps;
}

double peak_position(const ScalarField& f) {
  const Grid& g = f.grid();
  int best = 0;
  for (int i = 1; i < g.n(0); ++i)
    if (f.at(i) > f.at(best)) best = i;
  const double fm = f.at(g.fold(0, best - 1));
  const double f0 = f.at(best);
  const double fp = f.at(g.fold(0, best + 1));
  const double denom = fm - 2.0 * f0 + fp;
  const double off = denom == 0.0 ? 0.0 : 0.5 * (fm - fp) / denom;
  return g.center(0, best) + off * g.h(0);
}

}  // namespace

TEST_CASE("uniform rest state is a bitwise fixed point") {
  SolverConfig cfg;
  cfg.floor = 1e-8;
  for (const Grid& g : {Grid::make_1d(16, 1.0, Boundary::periodic),
                        Grid::make_2d(8, 8, 1.0, 1.0)}) {
    const ConservedField init = uniform_state(g, 0.5, 0.5);
    ConservedField s = init;
    const double dt = stable_dt(s, kParams, cfg);
    for (int n = 0; n < 100; ++n) s = step(s, kParams, cfg, dt, nullptr);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      CHECK(s.r_plus[k] == init.r_plus[k]);
      CHECK(s.r_minus[k] == init.r_minus[k]);
      CHECK(s.m.comp(0)[k] == 0.0);
    }
  }
}

TEST_CASE("rest state also holds at Dirichlet walls") {
  SolverConfig cfg;
  const Grid g = Grid::make_1d(16, 1.0, Boundary::dirichlet);
  const ConservedField init = uniform_state(g, 0.5, 0.5);
  ConservedField s = init;
  const double dt = stable_dt(s, kParams, cfg);
  for (int n = 0; n < 100; ++n) s = step(s, kParams, cfg, dt, nullptr);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    CHECK(s.r_plus[k] == init.r_plus[k]);
    CHECK(s.m.comp(0)[k] == 0.0);
  }
}

TEST_CASE("stable_dt scalings and guards") {
  SolverConfig cfg;
  cfg.cfl = 0.4;
  const Grid g = Grid::make_1d(64, 1.0, Boundary::periodic);
  // alpha = 1/2, rho+- = 1: sound speed max(sqrt(4), sqrt(2)) = 2
  const ConservedField s = uniform_state(g, 0.5, 0.5);

  const double dt1 = stable_dt(s, kParams.with_eps(0.1), cfg);
  const double expected = 0.4 * (1.0 / 64.0) * 0.1 / 2.0;
  CHECK(dt1 == doctest::Approx(expected).epsilon(1e-12));

  // halving eps halves the acoustic dt
  const double dt2 = stable_dt(s, kParams.with_eps(0.05), cfg);
  CHECK(dt2 == doctest::Approx(0.5 * dt1).epsilon(1e-12));

  // the viscous bound takes over for large mu
  FluidParams thick(4.0, 2.0, 50.0, 0.0, 0.1, 1.0);
  const double dt3 = stable_dt(s, thick, cfg);
  const double viscous = 0.4 * (1.0 / 64.0) * (1.0 / 64.0) * 1.0 / (2.0 * 100.0);
  CHECK(dt3 == doctest::Approx(viscous).epsilon(1e-12));

  const ConservedField vac = uniform_state(g, 0.0, 0.0);
  CHECK_THROWS(stable_dt(vac, kParams, cfg));
}

TEST_CASE("mass is conserved up to logged floor corrections") {
  SolverConfig cfg;
  cfg.floor = 1e-8;
  const Grid g = Grid::make_1d(64, 1.0, Boundary::periodic);
  ConservedField s(g);
  for (int i = 0; i < 64; ++i) {
    const double x = g.center(0, i);
    s.r_plus.at(i) = i < 32 ? 0.0 : 0.5;  // below floor on the left
    s.r_minus.at(i) = 0.5 + 0.1 * std::sin(2.0 * kPi * x);
  }
  const double mp0 = total(s.r_plus), mm0 = total(s.r_minus);

  StepStats stats;
  for (int n = 0; n < 20; ++n) {
    const double dt = stable_dt(s, kParams, cfg);
    s = step(s, kParams, cfg, dt, &stats);
  }
  CHECK(stats.floor_added_plus > 0.0);
  CHECK(std::abs(total(s.r_plus) - mp0 - stats.floor_added_plus) <= 1e-12);
  CHECK(std::abs(total(s.r_minus) - mm0 - stats.floor_added_minus) <= 1e-12);
  CHECK(min_value(s.r_plus) >= 1e-8);
}

TEST_CASE("mirror symmetry is preserved at Dirichlet walls") {
  SolverConfig cfg;
  const Grid g = Grid::make_1d(64, 1.0, Boundary::dirichlet);
  ConservedField s(g);
  for (int i = 0; i < 64; ++i) {
    const double x = g.center(0, i);
    s.r_plus.at(i) = 0.6 + 0.2 * std::cos(2.0 * kPi * x);   // even about 1/2
    s.r_minus.at(i) = 0.5 + 0.1 * std::cos(2.0 * kPi * x);
    s.m.comp(0).at(i) = 0.1 * std::sin(2.0 * kPi * x);      // odd about 1/2
  }
  const double mass0 = total(s.r_plus) + total(s.r_minus);

  for (int n = 0; n < 100; ++n) {
    const double dt = stable_dt(s, kParams, cfg);
    s = step(s, kParams, cfg, dt, nullptr);
  }

  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const int j = 63 - i;
    worst = std::max(worst, std::abs(s.r_plus.at(i) - s.r_plus.at(j)));
    worst = std::max(worst, std::abs(s.r_minus.at(i) - s.r_minus.at(j)));
    worst = std::max(worst, std::abs(s.m.comp(0).at(i) + s.m.comp(0).at(j)));
  }
  CHECK(worst <= 1e-10);

  // no-flux walls: total mass unchanged
  CHECK(std::abs(total(s.r_plus) + total(s.r_minus) - mass0) <= 1e-12);
}

TEST_CASE("viscous shear decays at the physical rate") {
  SolverConfig cfg;
  cfg.t_end = 0.3;
  cfg.diag_dt = 0.0;
  const Grid g = Grid::make_2d(64, 4, 1.0, 1.0);
  const FluidParams par(4.0, 2.0, 1e-2, 0.0, 0.2, 1.0);
  ConservedField s(g);
  const double amp = 0.05;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 64; ++i) {
      s.r_plus.at(i, j) = 0.5;
      s.r_minus.at(i, j) = 0.5;
      s.m.comp(1).at(i, j) = amp * std::sin(2.0 * kPi * g.center(0, i));
    }

  auto transverse_ke = [&](const ConservedField& state) {
    const PrimitiveField prim = reconstruct_field(state, par);
    double ke = 0.0;
    for (std::size_t k = 0; k < prim.rho.size(); ++k)
      ke += 0.5 * prim.rho[k] * prim.u.comp(1)[k] * prim.u.comp(1)[k];
    return ke * g.cell_volume();
  };

  const double ke0 = transverse_ke(s);
  const RunResult res = run(s, par, cfg);
  CHECK(!res.aborted);
  const double keT = transverse_ke(res.final_state);

  // ke ~ exp(-2 nu k^2 t) with nu = mu / rho = 1e-2, k = 2 pi
  const double rate = std::log(ke0 / keT) / (2.0 * cfg.t_end);
  const double physical = par.mu * 4.0 * kPi * kPi;
  CHECK(rate == doctest::Approx(physical).epsilon(0.2));
}

TEST_CASE("predicted mixture sound speed has the closed form at the symmetric point") {
  const FluidParams par(4.0, 2.0, 1e-3, 0.0, 1.0, 1.0);
  // R+- = 1/2 gives rho+- = 1 and c^2 = (R+ p_R+ + R- p_R-)/rho = 8/3
  CHECK(predicted_speed(0.5, 0.5, par) ==
        doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("acoustic pulse travels at the predicted speed") {
  const FluidParams par(4.0, 2.0, 1e-3, 0.0, 1.0, 1.0);
  SolverConfig cfg;
  cfg.t_end = 0.3;
  cfg.diag_dt = 0.0;
  const Grid g = Grid::make_1d(256, 1.0, Boundary::periodic);

  const double rp0 = 0.5, rm0 = 0.5;
  const double c = predicted_speed(rp0, rm0, par);
  const double amp = 1e-3, width = 0.05, x0 = 0.25;

  ConservedField s(g);
  for (int i = 0; i < 256; ++i) {
    const double x = g.center(0, i);
    const double bump = std::exp(-((x - x0) * (x - x0)) / (width * width));
    // right-moving simple wave: dR/R = u / c for both phases
    s.r_plus.at(i) = rp0 * (1.0 + amp * bump / c);
    s.r_minus.at(i) = rm0 * (1.0 + amp * bump / c);
    s.m.comp(0).at(i) = (s.r_plus.at(i) + s.r_minus.at(i)) * amp * bump;
  }

  ScalarField rho0(g);
  for (int i = 0; i < 256; ++i) rho0.at(i) = s.r_plus.at(i) + s.r_minus.at(i);
  const double start = peak_position(rho0);

  const RunResult res = run(s, par, cfg);
  CHECK(!res.aborted);

  ScalarField rhoT(g);
  for (int i = 0; i < 256; ++i)
    rhoT.at(i) = res.final_state.r_plus.at(i) + res.final_state.r_minus.at(i);
  const double stop = peak_position(rhoT);

  const double travelled = std::fmod(stop - start + 1.0, 1.0);
  const double measured = travelled / cfg.t_end;
  CHECK(measured == doctest::Approx(c).epsilon(0.05));
}

TEST_CASE("self-convergence order of the limited scheme") {
  auto solve = [&](int n, Limiter lim) {
    SolverConfig cfg;
    cfg.t_end = 0.02;
    cfg.diag_dt = 0.0;
    cfg.limiter = lim;
    const Grid g = Grid::make_1d(n, 1.0, Boundary::periodic);
    const FluidParams par(4.0, 2.0, 1e-3, 0.0, 0.5, 1.0);
    ConservedField s(g);
    for (int i = 0; i < n; ++i) {
      const double x = g.center(0, i);
      s.r_plus.at(i) = 0.5 + 0.05 * std::sin(2.0 * kPi * x);
      s.r_minus.at(i) = 0.5 + 0.05 * std::cos(2.0 * kPi * x);
      s.m.comp(0).at(i) =
          (s.r_plus.at(i) + s.r_minus.at(i)) * 0.1 * std::sin(2.0 * kPi * x);
    }
    return run(s, par, cfg).final_state;
  };
  auto restrict_l1_diff = [](const ConservedField& coarse,
                             const ConservedField& fine) {
    const Grid& g = coarse.r_plus.grid();
    double err = 0.0;
    for (int i = 0; i < g.n(0); ++i) {
      const double avg =
          0.5 * (fine.r_plus.at(2 * i) + fine.r_plus.at(2 * i + 1));
      err += std::abs(coarse.r_plus.at(i) - avg);
    }
    return err * g.h(0);
  };

  for (Limiter lim : {Limiter::minmod, Limiter::none}) {
    const ConservedField s64 = solve(64, lim);
    const ConservedField s128 = solve(128, lim);
    const ConservedField s256 = solve(256, lim);
    const double errA = restrict_l1_diff(s64, s128);
    const double errB = restrict_l1_diff(s128, s256);
    const double order = std::log2(errA / errB);
    if (lim == Limiter::minmod) {
      CHECK(order >= 1.5);
    } else {
      CHECK(order >= 0.7);
      CHECK(order <= 1.4);
    }
  }
}

TEST_CASE("run aborts on non-finite states") {
  SolverConfig cfg;
  cfg.t_end = 1.0;
  const Grid g = Grid::make_1d(8, 1.0, Boundary::periodic);
  ConservedField s = uniform_state(g, 0.5, 0.5);
  s.m.comp(0).at(0) = 1e200;  // first flux evaluation overflows
  const RunResult res = run(s, kParams, cfg);
  CHECK(res.aborted);
  CHECK(res.abort_reason.find("non-finite") != std::string::npos);
}

TEST_CASE("run aborts when energy grows past the configured factor") {
  SolverConfig cfg;
  cfg.t_end = 0.2;
  cfg.diag_dt = 0.01;
  cfg.energy_abort_factor = 0.9;  // even slightly dissipated states trip it
  const Grid g = Grid::make_1d(32, 1.0, Boundary::periodic);
  ConservedField s = uniform_state(g, 0.5, 0.5);
  for (int i = 0; i < 32; ++i)
    s.m.comp(0).at(i) = 0.05 * std::sin(2.0 * kPi * g.center(0, i));
  const RunResult res = run(s, kParams, cfg);
  CHECK(res.aborted);
  CHECK(res.abort_reason.find("energy") != std::string::npos);
}

TEST_CASE("run produces endpoint diagnostics and positive step count") {
  SolverConfig cfg;
  cfg.t_end = 0.01;
  cfg.diag_dt = 0.004;
  const Grid g = Grid::make_1d(32, 1.0, Boundary::periodic);
  ConservedField s = uniform_state(g, 0.5, 0.5);
  for (int i = 0; i < 32; ++i)
    s.m.comp(0).at(i) = 0.01 * std::sin(2.0 * kPi * g.center(0, i));
  const RunResult res = run(s, kParams, cfg);
  CHECK(!res.aborted);
  CHECK(res.steps > 0);
  CHECK(res.rows.size() >= 3);
  CHECK(res.rows.front().time == 0.0);
  CHECK(res.rows.back().time == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(res.max_pressure_residual <= 1e-10);

  CHECK_THROWS(step(s, kParams, cfg, 0.0, nullptr));
  SolverConfig bad;
  bad.t_end = -1.0;
  CHECK_THROWS(run(s, kParams, bad));
}

TEST_CASE("energy does not grow on a physical run") {
  SolverConfig cfg;
  cfg.t_end = 0.1;
  cfg.diag_dt = 0.02;
  const Grid g = Grid::make_2d(16, 16, 1.0, 1.0);
  ConservedField s(g);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      const double x = g.center(0, i), y = g.center(1, j);
      s.r_plus.at(i, j) = 0.5 + 0.02 * std::sin(2.0 * kPi * x);
      s.r_minus.at(i, j) = 0.5 + 0.02 * std::cos(2.0 * kPi * y);
      s.m.comp(0).at(i, j) = 0.1 * std::sin(2.0 * kPi * y);
      s.m.comp(1).at(i, j) = -0.1 * std::sin(2.0 * kPi * x);
    }
  const RunResult res = run(s, kParams.with_eps(0.2), cfg);
  CHECK(!res.aborted);
  const double e0 = res.rows.front().energy;
  for (const DiagnosticRow& row : res.rows)
    CHECK(row.energy <= e0 * (1.0 + 1e-3));
}
