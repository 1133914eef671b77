#pragma once

#include "bifluid/closure.hpp"
#include "bifluid/fields.hpp"
#include "bifluid/ops.hpp"

namespace bifluid {

// Pressure relative entropy H(rho|r) = (rho^g - r^g - g r^(g-1)(rho-r))/(g-1).
// Nonnegative, zero iff rho = r; equals (rho - r)^2 when g = 2.
double h_relative(double rho, double r, double gamma);

// Cellwise primitive description of a compressible state.
struct PrimitiveField {
  ScalarField alpha_plus;
  ScalarField rho_plus;
  ScalarField rho_minus;
  ScalarField rho;
  VectorField u;

  explicit PrimitiveField(const Grid& g)
      : alpha_plus(g), rho_plus(g), rho_minus(g), rho(g), u(g) {}
};

// Limit-system state: constant phase densities, transported fraction,
// divergence-free velocity.
struct LimitState {
  ScalarField alpha_plus;
  VectorField u;
  double rho_plus;
  double rho_minus;

  LimitState(const Grid& g, double rp, double rm)
      : alpha_plus(g), u(g), rho_plus(rp), rho_minus(rm) {}

  ScalarField r_plus() const;   // alpha_plus * rho_plus
  ScalarField r_minus() const;  // (1 - alpha_plus) * rho_minus
  ScalarField mixture_rho() const;
};

// Time-indexed limit states with linear interpolation, used to evaluate
// diagnostics along a compressible trajectory.
struct LimitTrajectory {
  std::vector<double> times;
  std::vector<LimitState> states;

  LimitState at(double t) const;
};

// Modulated energy: kinetic difference plus eps^-2 weighted pressure
// relative entropies of both phases.
double e1(const PrimitiveField& comp, const LimitState& limit,
          const FluidParams& params);

// Fractional-mass relative entropy: sum over phases of
// int R^eps ln_+(R^eps / R), with ln_+ s = max(0, ln s).
double e2(const ScalarField& r_plus_eps, const ScalarField& r_minus_eps,
          const ScalarField& r_plus, const ScalarField& r_minus);

// Physical energy int 1/2 rho |u|^2 + eps^-2 sum int alpha rho^g / (g - 1).
double energy(const PrimitiveField& state, const FluidParams& params);

// Csiszar-Kullback-Pinsker variant for equal-mass nonnegative fields.
// The factor-1 form ||f-g||_1 <= int f ln_+(f/g) fails (see tests); the
// factor-2 form and the factor-3 form for int f |ln(f/g)| hold.
struct CkpReport {
  double l1_diff;
  double entropy;        // int f ln_+(f/g)
  double abs_log;        // int f |ln(f/g)|
  double mass_mismatch;  // integrate(f) - integrate(g)
  bool factor1_holds;    // informational only
  bool factor2_ok;
  bool factor3_ok;
};

CkpReport ckp_check(const ScalarField& f, const ScalarField& g);

// Empirical constants of the sandwich bounds c1 * b <= H(rho|r) <= c2 * b
// with bracket b = |rho-r|^2 (|rho-r| < 1) or |rho-r|^gamma (else),
// r ranging over a compact subset of (0, inf).
struct SandwichReport {
  double c1;
  double c2;
  long violations;  // nonpositive or non-finite ratios
  long pairs;
};

SandwichReport sandwich_check(const std::vector<double>& rho_samples,
                              double r_lo, double r_hi, double gamma,
                              int r_samples = 64);

// L2-by-L1 interpolation control: for each phase,
// ||R^eps - R||_L2^2 <= C (eps^2 E1 + ||R+^eps - R+||_L1 + ||R-^eps - R-||_L1).
// ratio is the worst lhs/denominator over the two phases (0/0 -> 0).
struct L2ByL1Report {
  double lhs_plus;
  double lhs_minus;
  double denominator;
  double ratio;
  bool ok;
};

// Constant frozen from the seed-fixed randomized calibration set (observed
// max ratio 0.171 across seeds, rounded up one significant digit).
inline constexpr double kL2ByL1FrozenC = 0.2;

L2ByL1Report l2_by_l1_check(const PrimitiveField& comp, const LimitState& limit,
                            const FluidParams& params);

}  // namespace bifluid
