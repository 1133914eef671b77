#include "bifluid/compressible.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bifluid {

namespace {

// Generalized minmod slope, theta = 2 (monotonized central): selects the
// central slope in smooth regions, clips at extrema.
double mc_slope(double dm, double dp) {
  if (dm * dp <= 0.0) return 0.0;
  const double c = 0.5 * (dm + dp);
  const double lim = 2.0 * std::min(std::abs(dm), std::abs(dp));
  return std::copysign(std::min(std::abs(c), lim), c);
}

struct Workspace {
  std::vector<double> rho_p;  // reconstructed + phase density
  std::vector<double> rho;
  std::vector<double> ux, uy;
};

// Mixture characteristic speed bound. Under pressure equality the true
// speed stays below the faster phase's sound speed; phase - dominates at
// low densities when gamma+ > gamma-, so take the max of both. The
// companion density rho- = rho+^(gamma+/gamma-) folds into the exponent.
double sound_speed(double rho_p, const FluidParams& par) {
  const double gp = par.gamma_plus, gm = par.gamma_minus;
  const double cp2 = gp * std::pow(rho_p, gp - 1.0);
  const double cm2 = gm * std::pow(rho_p, gp - gp / gm);
  return std::sqrt(std::max(cp2, cm2));
}

void fill_primitives(const ConservedField& s, const FluidParams& par,
                     Workspace& w, double* max_residual) {
  const Grid& g = s.r_plus.grid();
  const std::size_t n = g.cells();
  w.rho_p.resize(n);
  w.rho.resize(n);
  w.ux.resize(n);
  w.uy.resize(n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double m[2] = {s.m.comp(0)[k], g.dim() == 2 ? s.m.comp(1)[k] : 0.0};
    const PrimitiveState ps =
        reconstruct(s.r_plus[k], s.r_minus[k], m, g.dim(), par);
    w.rho_p[k] = ps.rho_plus;
    w.rho[k] = ps.rho;
    w.ux[k] = ps.u[0];
    w.uy[k] = ps.u[1];
    if (max_residual) {
      const double pm = std::pow(ps.rho_minus, par.gamma_minus);
      const double res = std::abs(ps.p - pm) / std::max(1.0, ps.p);
      worst = std::max(worst, res);
    }
  }
  if (max_residual) *max_residual = std::max(*max_residual, worst);
}

// Flux accumulation for one axis. Fields are addressed through ghost
// accessors: densities copy the adjacent interior value at Dirichlet walls,
// momentum is zero there, ghost slopes vanish.
struct AxisSweep {
  const Grid& g;
  int axis;
  int n0, n1;
  bool periodic;

  AxisSweep(const Grid& grid, int ax)
      : g(grid), axis(ax), n0(grid.n(0)), n1(grid.dim() == 2 ? grid.n(1) : 1),
        periodic(grid.bc(ax) == Boundary::periodic) {}

  // folds the swept index; transverse index is always in range
  std::size_t cell(int i, int t) const {
    const int ii = axis == 0 ? i : t;
    const int jj = axis == 0 ? t : i;
    return g.index(g.fold(0, ii), g.fold(1, jj));
  }
  bool in_range(int i) const { return periodic || (i >= 0 && i < g.n(axis)); }
};

}  // namespace

PrimitiveField reconstruct_field(const ConservedField& s,
                                 const FluidParams& params,
                                 double* max_pressure_residual) {
  const Grid& g = s.r_plus.grid();
  PrimitiveField out(g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double m[2] = {s.m.comp(0)[k], g.dim() == 2 ? s.m.comp(1)[k] : 0.0};
    const PrimitiveState ps =
        reconstruct(s.r_plus[k], s.r_minus[k], m, g.dim(), params);
    out.alpha_plus[k] = ps.alpha_plus;
    out.rho_plus[k] = ps.rho_plus;
    out.rho_minus[k] = ps.rho_minus;
    out.rho[k] = ps.rho;
    out.u.comp(0)[k] = ps.u[0];
    if (g.dim() == 2) out.u.comp(1)[k] = ps.u[1];
    const double pm = std::pow(ps.rho_minus, params.gamma_minus);
    worst = std::max(worst, std::abs(ps.p - pm) / std::max(1.0, ps.p));
  }
  if (max_pressure_residual) *max_pressure_residual = worst;
  return out;
}

double stable_dt(const ConservedField& s, const FluidParams& params,
                 const SolverConfig& config) {
  const Grid& g = s.r_plus.grid();
  Workspace w;
  fill_primitives(s, params, w, nullptr);

  double max_speed = 0.0;
  double rho_min = 1e300;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    if (w.rho[k] < kVacuumThreshold) continue;
    const double c = sound_speed(w.rho_p[k], params);
    const double umax =
        std::max(std::abs(w.ux[k]), g.dim() == 2 ? std::abs(w.uy[k]) : 0.0);
    max_speed = std::max(max_speed, umax + c / params.eps);
    rho_min = std::min(rho_min, w.rho[k]);
  }
  if (max_speed == 0.0)
    throw std::runtime_error("stable_dt: state is all vacuum");

  double h_min = g.h(0);
  if (g.dim() == 2) h_min = std::min(h_min, g.h(1));
  const double dt_acoustic = config.cfl * h_min / max_speed;
  const double dt_viscous = config.cfl * h_min * h_min * rho_min /
                            (2.0 * g.dim() * (2.0 * params.mu + params.lambda));
  return std::min(dt_acoustic, dt_viscous);
}

namespace {

// Semi-discrete right-hand side L(U): Rusanov convective fluxes plus
// explicit central viscosity on the momentum.
void rhs(const ConservedField& s, const FluidParams& par,
         const SolverConfig& cfg, ConservedField& out, double* max_residual) {
  const Grid& g = s.r_plus.grid();
  const int dim = g.dim();
  const double eps2 = par.eps * par.eps;
  const double gp = par.gamma_plus;

  Workspace w;
  fill_primitives(s, par, w, max_residual);

  for (int d = 0; d < dim; ++d) {
    out.m.comp(d).data().assign(g.cells(), 0.0);
  }
  out.r_plus.data().assign(g.cells(), 0.0);
  out.r_minus.data().assign(g.cells(), 0.0);

  // viscous momentum source mu lap(u) + (mu+lambda) grad(div u)
  {
    VectorField u(g);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      u.comp(0)[k] = w.ux[k];
      if (dim == 2) u.comp(1)[k] = w.uy[k];
    }
    const VectorField lap = laplacian(u);
    const VectorField gd = grad_div(u);
    for (int d = 0; d < dim; ++d)
      for (std::size_t k = 0; k < g.cells(); ++k)
        out.m.comp(d)[k] =
            par.mu * lap.comp(d)[k] + (par.mu + par.lambda) * gd.comp(d)[k];
  }

  const bool use_slopes = cfg.limiter == Limiter::minmod;

  for (int axis = 0; axis < dim; ++axis) {
    const AxisSweep sw(g, axis);
    const int n = g.n(axis);
    const int nt = axis == 0 ? (dim == 2 ? g.n(1) : 1) : g.n(0);
    const double h = g.h(axis);
    const int nf = sw.periodic ? n : n + 1;

    // fields advanced by this sweep: R+, R-, mx, my, rho_plus (for pressure)
    const int nv = 4 + (dim == 2 ? 1 : 0);
    auto value = [&](int v, int i, int t) -> double {
      if (!sw.periodic && (i < 0 || i >= n)) {
        // Dirichlet ghost: zero-gradient densities, zero momentum
        const int ic = i < 0 ? 0 : n - 1;
        const std::size_t k = sw.cell(ic, t);
        switch (v) {
          case 0: return s.r_plus[k];
          case 1: return s.r_minus[k];
          case 2: return 0.0;
          case 3: return dim == 2 ? 0.0 : w.rho_p[k];
          default: return w.rho_p[k];
        }
      }
      const std::size_t k = sw.cell(i, t);
      switch (v) {
        case 0: return s.r_plus[k];
        case 1: return s.r_minus[k];
        case 2: return s.m.comp(0)[k];
        case 3: return dim == 2 ? s.m.comp(1)[k] : w.rho_p[k];
        default: return w.rho_p[k];
      }
    };
    auto slope = [&](int v, int i, int t) -> double {
      if (!use_slopes) return 0.0;
      if (!sw.periodic && (i < 0 || i >= n)) return 0.0;
      const double qm = value(v, i - 1, t);
      const double q0 = value(v, i, t);
      const double qp = value(v, i + 1, t);
      return mc_slope(q0 - qm, qp - q0);
    };

    for (int t = 0; t < nt; ++t) {
      for (int f = 0; f < nf; ++f) {
        const int li = f - 1;
        const int ri = f;

        // Wall face: the normal velocity vanishes, so nothing convects and
        // the only flux is the interior-extrapolated pressure pushing on the
        // normal momentum. Densities are conserved exactly this way.
        if (!sw.periodic && (f == 0 || f == n)) {
          const int in = f == 0 ? ri : li;
          const double rp_face = std::max(0.0, value(nv - 1, in, t));
          const double p_wall = std::pow(rp_face, gp);
          const std::size_t k = sw.cell(in, t);
          const double sign = f == 0 ? 1.0 : -1.0;
          (axis == 0 ? out.m.comp(0) : out.m.comp(1))[k] +=
              sign * p_wall / (eps2 * h);
          continue;
        }

        double qL[5], qR[5];
        for (int v = 0; v < nv; ++v) {
          qL[v] = value(v, li, t) + 0.5 * slope(v, li, t);
          qR[v] = value(v, ri, t) - 0.5 * slope(v, ri, t);
        }
        const int vp = nv - 1;  // rho_plus slot
        const double RpL = std::max(0.0, qL[0]);
        const double RmL = std::max(0.0, qL[1]);
        const double RpR = std::max(0.0, qR[0]);
        const double RmR = std::max(0.0, qR[1]);
        const double rhoL = RpL + RmL;
        const double rhoR = RpR + RmR;
        const double mxL = qL[2], mxR = qR[2];
        const double myL = dim == 2 ? qL[3] : 0.0;
        const double myR = dim == 2 ? qR[3] : 0.0;
        const double rpL = std::max(0.0, qL[vp]);
        const double rpR = std::max(0.0, qR[vp]);

        const double uxL = rhoL < kVacuumThreshold ? 0.0 : mxL / rhoL;
        const double uyL = rhoL < kVacuumThreshold ? 0.0 : myL / rhoL;
        const double uxR = rhoR < kVacuumThreshold ? 0.0 : mxR / rhoR;
        const double uyR = rhoR < kVacuumThreshold ? 0.0 : myR / rhoR;
        const double unL = axis == 0 ? uxL : uyL;
        const double unR = axis == 0 ? uxR : uyR;

        const double pL = std::pow(rpL, gp);
        const double pR = std::pow(rpR, gp);
        const double cL = sound_speed(rpL, par);
        const double cR = sound_speed(rpR, par);
        const double smax = std::max(std::abs(unL) + cL / par.eps,
                                     std::abs(unR) + cR / par.eps);

        double flux[4];
        flux[0] = 0.5 * (RpL * unL + RpR * unR) - 0.5 * smax * (RpR - RpL);
        flux[1] = 0.5 * (RmL * unL + RmR * unR) - 0.5 * smax * (RmR - RmL);
        flux[2] = 0.5 * (mxL * unL + mxR * unR) - 0.5 * smax * (mxR - mxL);
        flux[3] = 0.5 * (myL * unL + myR * unR) - 0.5 * smax * (myR - myL);
        flux[axis == 0 ? 2 : 3] += 0.5 * (pL + pR) / eps2;

        if (sw.in_range(li)) {
          const std::size_t k = sw.cell(li, t);
          out.r_plus[k] -= flux[0] / h;
          out.r_minus[k] -= flux[1] / h;
          out.m.comp(0)[k] -= flux[2] / h;
          if (dim == 2) out.m.comp(1)[k] -= flux[3] / h;
        }
        if (sw.in_range(ri)) {
          const std::size_t k = sw.cell(ri, t);
          out.r_plus[k] += flux[0] / h;
          out.r_minus[k] += flux[1] / h;
          out.m.comp(0)[k] += flux[2] / h;
          if (dim == 2) out.m.comp(1)[k] += flux[3] / h;
        }
      }
    }
  }
}

void axpy(ConservedField& y, double a, const ConservedField& x) {
  for (std::size_t k = 0; k < y.r_plus.size(); ++k) {
    y.r_plus[k] += a * x.r_plus[k];
    y.r_minus[k] += a * x.r_minus[k];
  }
  for (int d = 0; d < y.m.dim(); ++d)
    for (std::size_t k = 0; k < y.m.comp(d).size(); ++k)
      y.m.comp(d)[k] += a * x.m.comp(d)[k];
}

// Raises fractional masses to the floor; returns mass added (already
// weighted by cell volume).
void apply_floor(ConservedField& s, double floor, double weight,
                 StepStats* stats) {
  if (floor <= 0.0) return;
  const double vol = s.r_plus.grid().cell_volume();
  double addp = 0.0, addm = 0.0;
  for (std::size_t k = 0; k < s.r_plus.size(); ++k) {
    if (s.r_plus[k] < floor) {
      addp += floor - s.r_plus[k];
      s.r_plus[k] = floor;
    }
    if (s.r_minus[k] < floor) {
      addm += floor - s.r_minus[k];
      s.r_minus[k] = floor;
    }
  }
  if (stats) {
    stats->floor_added_plus += addp * vol * weight;
    stats->floor_added_minus += addm * vol * weight;
  }
}

}  // namespace

ConservedField step(const ConservedField& s, const FluidParams& params,
                    const SolverConfig& config, double dt, StepStats* stats) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const Grid& g = s.r_plus.grid();
  double* res = stats ? &stats->max_pressure_residual : nullptr;

  ConservedField k1(g);
  rhs(s, params, config, k1, res);
  ConservedField u1 = s;
  axpy(u1, dt, k1);
  apply_floor(u1, config.floor, 0.5, stats);  // enters the average at weight 1/2

  ConservedField k2(g);
  rhs(u1, params, config, k2, res);
  axpy(u1, dt, k2);

  ConservedField out = s;
  axpy(out, 1.0, u1);
  for (std::size_t k = 0; k < out.r_plus.size(); ++k) {
    out.r_plus[k] *= 0.5;
    out.r_minus[k] *= 0.5;
  }
  for (int d = 0; d < out.m.dim(); ++d)
    for (std::size_t k = 0; k < out.m.comp(d).size(); ++k)
      out.m.comp(d)[k] *= 0.5;
  apply_floor(out, config.floor, 1.0, stats);
  return out;
}

namespace {

VectorField velocity_of(const ConservedField& s) {
  const Grid& g = s.r_plus.grid();
  VectorField u(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double rho = s.r_plus[k] + s.r_minus[k];
    if (rho < kVacuumThreshold) continue;
    u.comp(0)[k] = s.m.comp(0)[k] / rho;
    if (g.dim() == 2) u.comp(1)[k] = s.m.comp(1)[k] / rho;
  }
  return u;
}

bool state_finite(const ConservedField& s) {
  return all_finite(s.r_plus) && all_finite(s.r_minus) && all_finite(s.m);
}

}  // namespace

RunResult run(const ConservedField& init, const FluidParams& params,
              const SolverConfig& config, const LimitTrajectory* limit) {
  const Grid& g = init.r_plus.grid();
  if (!(config.t_end > 0.0))
    throw std::invalid_argument("run: t_end must be positive");
  if (!state_finite(init))
    throw std::invalid_argument("run: initial state has non-finite entries");

  RunResult result(g);
  result.final_state = init;
  result.has_limit = limit != nullptr;

  StepStats stats;
  double t = 0.0;
  double dissipation = 0.0;
  double energy0 = 0.0;

  auto diagnose = [&](const ConservedField& s, double time) {
    const PrimitiveField prim = reconstruct_field(s, params, nullptr);
    DiagnosticRow row;
    row.time = time;
    row.energy = energy(prim, params);
    row.dissipation = dissipation;
    row.floor_plus = stats.floor_added_plus;
    row.floor_minus = stats.floor_added_minus;
    {
      const ScalarField div = divergence(prim.u);
      row.div_l2_sq = norm_l2_sq(div);
    }
    if (limit) {
      const LimitState lim = limit->at(time);
      row.e1 = e1(prim, lim, params);
      const ScalarField rp_lim = lim.r_plus();
      const ScalarField rm_lim = lim.r_minus();
      row.e2 = e2(s.r_plus, s.r_minus, rp_lim, rm_lim);
      row.e_total = row.e1 + row.e2;

      ScalarField dp(g), dm(g);
      for (std::size_t k = 0; k < dp.size(); ++k) {
        dp[k] = s.r_plus[k] - rp_lim[k];
        dm[k] = s.r_minus[k] - rm_lim[k];
      }
      row.drp_l1 = norm_l1(dp);
      row.drm_l1 = norm_l1(dm);
      row.drp_l2 = std::sqrt(norm_l2_sq(dp));
      row.drm_l2 = std::sqrt(norm_l2_sq(dm));

      VectorField du = prim.u;
      for (int d = 0; d < du.dim(); ++d)
        for (std::size_t k = 0; k < du.comp(d).size(); ++k)
          du.comp(d)[k] -= lim.u.comp(d)[k];
      row.du_l2 = std::sqrt(norm_l2_sq(du));

      // factor-2 entropy bound with measured mass-mismatch slack
      const double mis = std::abs(integrate(dp)) + std::abs(integrate(dm));
      const double scale = std::max(1.0, integrate(s.r_plus) + integrate(s.r_minus));
      row.ckp_ok =
          row.drp_l1 + row.drm_l1 <= 2.0 * row.e2 + mis + 1e-12 * scale;

      const L2ByL1Report rep = l2_by_l1_check(prim, lim, params);
      row.l2l1_ratio = rep.ratio;
    }
    result.rows.push_back(row);
    return row.energy;
  };

  energy0 = diagnose(result.final_state, 0.0);

  const double t_end = config.t_end;
  double next_diag =
      config.diag_dt > 0.0 ? config.diag_dt : t_end;
  const double tiny = 1e-12 * t_end;

  while (t < t_end - tiny) {
    double dt = stable_dt(result.final_state, params, config);
    dt = std::min(dt, t_end - t);
    if (config.diag_dt > 0.0) dt = std::min(dt, next_diag - t);

    result.final_state = step(result.final_state, params, config, dt, &stats);
    t += dt;
    ++result.steps;

    if (!state_finite(result.final_state)) {
      result.aborted = true;
      result.abort_reason = "non-finite state detected";
      break;
    }

    {
      const VectorField u = velocity_of(result.final_state);
      const ScalarField div = divergence(u);
      const double div2 = norm_l2_sq(div);
      result.int_div_l2_sq += dt * div2;
      double grad2 = 0.0;
      for (int d = 0; d < u.dim(); ++d)
        grad2 += norm_l2_sq(gradient(u.comp(d)));
      dissipation += dt * (params.mu * grad2 +
                           (params.mu + params.lambda) * div2);
      if (limit) {
        const LimitState lim = limit->at(t);
        double du2 = 0.0;
        for (int d = 0; d < u.dim(); ++d)
          for (std::size_t k = 0; k < u.comp(d).size(); ++k) {
            const double dv = u.comp(d)[k] - lim.u.comp(d)[k];
            du2 += dv * dv;
          }
        result.int_du_l2_sq += dt * du2 * g.cell_volume();
      }
    }

    const bool at_diag =
        config.diag_dt > 0.0 && t >= next_diag - tiny && t < t_end - tiny;
    if (at_diag || t >= t_end - tiny) {
      const double e = diagnose(result.final_state, t);
      if (at_diag) next_diag += config.diag_dt;
      if (e > config.energy_abort_factor * energy0) {
        result.aborted = true;
        result.abort_reason = "energy growth beyond abort factor";
        break;
      }
    }
  }

  result.floor_added_plus = stats.floor_added_plus;
  result.floor_added_minus = stats.floor_added_minus;
  result.max_pressure_residual = stats.max_pressure_residual;
  return result;
}

}  // namespace bifluid
