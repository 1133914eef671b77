#include "bifluid/incompressible.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bifluid {

namespace {

double mc_slope(double dm, double dp) {
  if (dm * dp <= 0.0) return 0.0;
  const double c = 0.5 * (dm + dp);
  const double lim = 2.0 * std::min(std::abs(dm), std::abs(dp));
  return std::copysign(std::min(std::abs(c), lim), c);
}

// div(u q) with face-averaged velocities and upwinded face values of q.
// Face velocity averaging keeps the flux divergence of q = 1 equal to the
// central divergence of u.
ScalarField transport_div(const ScalarField& q, const VectorField& u,
                          Limiter limiter) {
  const Grid& g = q.grid();
  ScalarField out(g);
  const bool slopes = limiter == Limiter::minmod;
  const int n1 = g.dim() == 2 ? g.n(1) : 1;

  for (int axis = 0; axis < g.dim(); ++axis) {
    const int n = g.n(axis);
    const double h = g.h(axis);
    const int nt = axis == 0 ? n1 : g.n(0);
    auto cell = [&](int i, int t) {
      const int ii = axis == 0 ? i : t;
      const int jj = axis == 0 ? t : i;
      return g.index(g.fold(0, ii), g.fold(1, jj));
    };
    for (int t = 0; t < nt; ++t) {
      for (int f = 0; f < n; ++f) {  // face between cells f-1 and f (wrapped)
        const std::size_t kl = cell(f - 1, t);
        const std::size_t kr = cell(f, t);
        const double uf = 0.5 * (u.comp(axis)[kl] + u.comp(axis)[kr]);
        double qf;
        if (uf >= 0.0) {
          double sl = 0.0;
          if (slopes)
            sl = mc_slope(q[kl] - q[cell(f - 2, t)], q[kr] - q[kl]);
          qf = q[kl] + 0.5 * sl;
        } else {
          double sl = 0.0;
          if (slopes)
            sl = mc_slope(q[kr] - q[kl], q[cell(f + 1, t)] - q[kr]);
          qf = q[kr] - 0.5 * sl;
        }
        const double flux = uf * qf / h;
        out[kl] += flux;
        out[kr] -= flux;
      }
    }
  }
  return out;
}

double advective_cfl(const VectorField& u, double dt) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (int d = 0; d < g.dim(); ++d) s += max_abs(u.comp(d)) / g.h(d);
  return dt * s;
}

}  // namespace

ScalarField advect_alpha(const ScalarField& alpha, const VectorField& u,
                         double dt, Limiter limiter) {
  if (alpha.grid() != u.grid())
    throw std::invalid_argument("advect_alpha: fields on different grids");
  if (advective_cfl(u, dt) > 1.0)
    throw std::invalid_argument("advect_alpha: CFL exceeds 1");
  const ScalarField div = transport_div(alpha, u, limiter);
  ScalarField out = alpha;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= dt * div[k];
  return out;
}

VectorField momentum_step(const LimitState& state, const FluidParams& params,
                          double dt, Limiter limiter) {
  const Grid& g = state.u.grid();
  const ScalarField rho = state.mixture_rho();
  const VectorField lap = laplacian(state.u);
  VectorField out = state.u;
  for (int d = 0; d < g.dim(); ++d) {
    const ScalarField adv = transport_div(state.u.comp(d), state.u, limiter);
    for (std::size_t k = 0; k < out.comp(d).size(); ++k)
      out.comp(d)[k] +=
          dt * (-adv[k] + params.mu * lap.comp(d)[k] / rho[k]);
  }
  return out;
}

ProjectionResult project(const VectorField& u_star, const ScalarField& rho,
                         double dt, double tol, int max_iter) {
  const Grid& g = u_star.grid();
  if (g != rho.grid())
    throw std::invalid_argument("project: fields on different grids");
  if (!(dt > 0.0)) throw std::invalid_argument("project: dt must be positive");
  if (!(min_value(rho) > 0.0))
    throw std::invalid_argument("project: density must be positive");
  for (int d = 0; d < g.dim(); ++d)
    if (g.bc(d) != Boundary::periodic)
      throw std::invalid_argument("project: periodic grids only");

  ScalarField w(g);  // 1/rho
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = 1.0 / rho[k];

  // SPD operator A x = -div((1/rho) grad x)
  auto apply = [&](const ScalarField& x) {
    VectorField gx = gradient(x);
    for (int d = 0; d < g.dim(); ++d)
      for (std::size_t k = 0; k < gx.comp(d).size(); ++k)
        gx.comp(d)[k] *= w[k];
    ScalarField ax = divergence(gx);
    for (std::size_t k = 0; k < ax.size(); ++k) ax[k] = -ax[k];
    return ax;
  };

  const ScalarField div_star = divergence(u_star);
  ScalarField b(g);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = -div_star[k] / dt;

  // The wide stencil decouples parity classes along even-sized axes; the
  // kernel of A is constant on each class. Remove that component from b so
  // roundoff in div_star cannot make the singular system inconsistent.
  {
    const int cx = g.n(0) % 2 == 0 ? 2 : 1;
    const int ny = g.dim() == 2 ? g.n(1) : 1;
    const int cy = g.dim() == 2 && ny % 2 == 0 ? 2 : 1;
    for (int pj = 0; pj < cy; ++pj)
      for (int pi = 0; pi < cx; ++pi) {
        double sum = 0.0;
        long count = 0;
        for (int j = pj; j < ny; j += cy)
          for (int i = pi; i < g.n(0); i += cx) {
            sum += b.at(i, j);
            ++count;
          }
        const double mean = sum / static_cast<double>(count);
        for (int j = pj; j < ny; j += cy)
          for (int i = pi; i < g.n(0); i += cx) b.at(i, j) -= mean;
      }
  }

  const double bnorm = std::sqrt(norm_l2_sq(b));
  ProjectionResult out{u_star, ScalarField(g), 0, 0.0};
  if (bnorm == 0.0) return out;

  // Jacobi preconditioner: diagonal of A
  ScalarField diag(g);
  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      double s = 0.0;
      s += (w[g.index(g.fold(0, i + 1), j)] + w[g.index(g.fold(0, i - 1), j)]) /
           (4.0 * g.h(0) * g.h(0));
      if (g.dim() == 2)
        s += (w[g.index(i, g.fold(1, j + 1))] + w[g.index(i, g.fold(1, j - 1))]) /
             (4.0 * g.h(1) * g.h(1));
      diag.at(i, j) = s;
    }

  ScalarField x(g), r = b, z(g), p(g);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = r[k] / diag[k];
  p = z;
  double rz = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) rz += r[k] * z[k];

  std::vector<double> history;
  double rel = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const ScalarField ap = apply(p);
    double pap = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) pap += p[k] * ap[k];
    if (pap == 0.0) break;
    const double alpha = rz / pap;
    double rn2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
      rn2 += r[k] * r[k];
    }
    rel = std::sqrt(rn2) / bnorm;
    history.push_back(rel);
    if (rel <= tol) {
      ++it;
      break;
    }
    double rzn = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] = r[k] / diag[k];
      rzn += r[k] * z[k];
    }
    const double beta = rzn / rz;
    rz = rzn;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
  }

  if (rel > tol) {
    std::ostringstream msg;
    msg << "project: CG stalled at relative residual " << rel << " after "
        << it << " iterations; history tail:";
    const std::size_t tail = history.size() > 5 ? history.size() - 5 : 0;
    for (std::size_t k = tail; k < history.size(); ++k)
      msg << " " << history[k];
    throw std::runtime_error(msg.str());
  }

  // zero-mean normalization
  double mean = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) mean += x[k];
  mean /= static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] -= mean;

  const VectorField gx = gradient(x);
  for (int d = 0; d < g.dim(); ++d)
    for (std::size_t k = 0; k < out.u.comp(d).size(); ++k)
      out.u.comp(d)[k] -= dt * w[k] * gx.comp(d)[k];
  out.pi = x;
  out.iterations = it;
  out.rel_residual = rel;
  return out;
}

LimitRunResult run_limit(const LimitState& init, const FluidParams& params,
                         const LimitConfig& config) {
  const Grid& g = init.alpha_plus.grid();
  if (g.dim() != 2)
    throw std::invalid_argument(
        "run_limit: 2D periodic grids only (the 1D limit velocity is zero)");
  if (params.gamma_plus == params.gamma_minus)
    throw std::invalid_argument(
        "run_limit: limit system needs distinct adiabatic exponents");
  {
    const double lo = min_value(init.alpha_plus);
    const double hi = max_value(init.alpha_plus);
    if (!(lo > 0.0) || !(hi < 1.0))
      throw std::invalid_argument(
          "run_limit: initial fraction must stay strictly inside (0, 1)");
  }
  if (!(config.t_end > 0.0))
    throw std::invalid_argument("run_limit: t_end must be positive");

  LimitRunResult result(g);
  LimitState state = init;
  state.rho_plus = params.rho_plus_limit();
  state.rho_minus = params.rho_minus_limit();

  auto kinetic = [&](const LimitState& s) {
    const ScalarField rho = s.mixture_rho();
    double ke = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      double u2 = 0.0;
      for (int d = 0; d < 2; ++d)
        u2 += s.u.comp(d)[k] * s.u.comp(d)[k];
      ke += 0.5 * rho[k] * u2;
    }
    return ke * g.cell_volume();
  };

  // initial projection makes u divergence-free before the first snapshot
  {
    const ScalarField rho = state.mixture_rho();
    const double dt0 = 1.0;
    const ProjectionResult pr =
        project(state.u, rho, dt0, config.poisson_tol, config.poisson_max_iter);
    state.u = pr.u;
    result.max_div_l2 = std::sqrt(norm_l2_sq(divergence(state.u)));
  }

  const double alpha_mass0 = integrate(state.alpha_plus);
  result.ke_initial = kinetic(state);
  double ke_prev = result.ke_initial;

  auto snapshot = [&](double time) {
    result.trajectory.times.push_back(time);
    result.trajectory.states.push_back(state);
  };
  snapshot(0.0);

  const double t_end = config.t_end;
  const double tiny = 1e-12 * t_end;
  double next_snap = config.snapshot_dt > 0.0 ? config.snapshot_dt : t_end;
  double t = 0.0;

  while (t < t_end - tiny) {
    double max_u = 0.0;
    double cfl_sum = 0.0;
    for (int d = 0; d < 2; ++d) {
      const double m = max_abs(state.u.comp(d));
      max_u = std::max(max_u, m);
      cfl_sum += m / g.h(d);
    }
    const ScalarField rho = state.mixture_rho();
    const double rho_min = min_value(rho);
    const double h_min = std::min(g.h(0), g.h(1));
    double dt = config.cfl * h_min * h_min * rho_min / (4.0 * params.mu);
    if (cfl_sum > 0.0) dt = std::min(dt, config.cfl / cfl_sum);
    dt = std::min(dt, t_end - t);
    if (config.snapshot_dt > 0.0) dt = std::min(dt, next_snap - t);

    const ScalarField alpha_new =
        advect_alpha(state.alpha_plus, state.u, dt, config.limiter);
    const VectorField u_star = momentum_step(state, params, dt, config.limiter);

    state.alpha_plus = alpha_new;
    const ScalarField rho_new = state.mixture_rho();
    const ProjectionResult pr = project(u_star, rho_new, dt, config.poisson_tol,
                                        config.poisson_max_iter);
    state.u = pr.u;
    result.pi_final = pr.pi;
    t += dt;
    ++result.steps;

    result.max_div_l2 = std::max(
        result.max_div_l2, std::sqrt(norm_l2_sq(divergence(state.u))));

    const double ke = kinetic(state);
    if (ke > ke_prev * (1.0 + 1e-12)) result.ke_monotone = false;
    ke_prev = ke;

    if (!all_finite(state.alpha_plus) || !all_finite(state.u))
      throw std::runtime_error("run_limit: non-finite state");

    const bool at_snap = config.snapshot_dt > 0.0 && t >= next_snap - tiny &&
                         t < t_end - tiny;
    if (at_snap) {
      snapshot(t);
      next_snap += config.snapshot_dt;
    }
  }
  snapshot(t_end);

  result.ke_final = ke_prev;
  result.alpha_integral_drift =
      std::abs(integrate(state.alpha_plus) - alpha_mass0);
  return result;
}

}  // namespace bifluid
