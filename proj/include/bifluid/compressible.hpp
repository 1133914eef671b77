#pragma once

#include <string>
#include <vector>

#include "bifluid/entropy.hpp"

namespace bifluid {

struct ConservedField {
  ScalarField r_plus;
  ScalarField r_minus;
  VectorField m;

  explicit ConservedField(const Grid& g) : r_plus(g), r_minus(g), m(g) {}
};

enum class Limiter { none, minmod };

struct SolverConfig {
  double cfl = 0.4;
  double floor = 1e-8;  // 0 disables density flooring
  double t_end = 0.5;
  double diag_dt = 0.025;  // diagnostic cadence (0: endpoints only)
  Limiter limiter = Limiter::minmod;
  double energy_abort_factor = 1.05;
};

// Cellwise closure reconstruction of the whole state; max_pressure_residual
// receives the worst relative pressure-equality defect if non-null.
PrimitiveField reconstruct_field(const ConservedField& s,
                                 const FluidParams& params,
                                 double* max_pressure_residual = nullptr);

// Acoustic bound cfl*h/max(|u| + c/eps) combined with the explicit viscous
// bound cfl*h^2*min(rho)/(2*dim*(2mu+lambda)).
double stable_dt(const ConservedField& s, const FluidParams& params,
                 const SolverConfig& config);

struct StepStats {
  double floor_added_plus = 0.0;   // mass restored by flooring
  double floor_added_minus = 0.0;
  double max_pressure_residual = 0.0;
};

// One SSP-RK2 step of the Rusanov finite-volume scheme with wave speed
// |u| + c/eps, optional monotonized-central reconstruction, stiff pressure
// eps^-2 p as a conservative momentum flux, and explicit central viscosity.
ConservedField step(const ConservedField& s, const FluidParams& params,
                    const SolverConfig& config, double dt,
                    StepStats* stats = nullptr);

struct DiagnosticRow {
  double time = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double e_total = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;  // accumulated mu||grad u||^2 + (mu+lambda)||div u||^2
  double drp_l1 = 0.0;
  double drm_l1 = 0.0;
  double drp_l2 = 0.0;
  double drm_l2 = 0.0;
  double du_l2 = 0.0;
  double div_l2_sq = 0.0;
  double floor_plus = 0.0;   // cumulative floor corrections
  double floor_minus = 0.0;
  bool ckp_ok = true;        // L1 diff <= 2 E2 + mass-mismatch slack
  double l2l1_ratio = 0.0;
};

struct RunResult {
  ConservedField final_state;
  std::vector<DiagnosticRow> rows;
  long steps = 0;
  bool aborted = false;
  std::string abort_reason;
  double floor_added_plus = 0.0;
  double floor_added_minus = 0.0;
  double max_pressure_residual = 0.0;
  double int_div_l2_sq = 0.0;   // int_0^T ||div u||_L2^2 dt
  double int_du_l2_sq = 0.0;    // int_0^T ||u - u_lim||_L2^2 dt (with limit)
  bool has_limit = false;

  explicit RunResult(const Grid& g) : final_state(g) {}
};

// Advances to t_end with per-step stability, conservation accounting and
// NaN/energy-growth aborts; entropy diagnostics are evaluated against the
// interpolated limit trajectory when one is supplied.
RunResult run(const ConservedField& init, const FluidParams& params,
              const SolverConfig& config,
              const LimitTrajectory* limit = nullptr);

}  // namespace bifluid
