#pragma once

#include "bifluid/compressible.hpp"

namespace bifluid {

struct LimitConfig {
  double cfl = 0.4;
  double t_end = 0.5;
  double snapshot_dt = 0.025;  // trajectory cadence (0: endpoints only)
  Limiter limiter = Limiter::minmod;
  double poisson_tol = 1e-10;  // relative residual
  int poisson_max_iter = 20000;
};

// Conservative finite-volume transport of alpha by the face-averaged
// velocity (upwind face values, optional monotonized-central slopes).
// Preserves the integral exactly on periodic grids; throws if the
// advective CFL exceeds 1.
ScalarField advect_alpha(const ScalarField& alpha, const VectorField& u,
                         double dt, Limiter limiter);

// Explicit advection + viscous half step: u* = u + dt (-div(u u) + mu lap u / rho).
VectorField momentum_step(const LimitState& state, const FluidParams& params,
                          double dt, Limiter limiter);

struct ProjectionResult {
  VectorField u;
  ScalarField pi;  // zero-mean pressure
  int iterations;
  double rel_residual;
};

// Variable-coefficient pressure projection: solves
// div((1/rho) grad Pi) = div(u*)/dt with diagonally preconditioned CG,
// then corrects u = u* - (dt/rho) grad Pi. Uses the same central
// divergence/gradient as the diagnostics, so the corrected field is
// divergence-free in that operator.
ProjectionResult project(const VectorField& u_star, const ScalarField& rho,
                         double dt, double tol, int max_iter);

struct LimitRunResult {
  LimitTrajectory trajectory;
  long steps = 0;
  double ke_initial = 0.0;
  double ke_final = 0.0;
  bool ke_monotone = true;
  double max_div_l2 = 0.0;       // over all post-projection velocities
  double alpha_integral_drift = 0.0;
  ScalarField pi_final;

  explicit LimitRunResult(const Grid& g) : pi_final(g) {}
};

// Advances the limit system on a 2D periodic grid: alpha transport,
// momentum step, projection. Requires gamma_plus != gamma_minus and the
// initial fraction strictly inside (0, 1).
LimitRunResult run_limit(const LimitState& init, const FluidParams& params,
                         const LimitConfig& config);

}  // namespace bifluid
