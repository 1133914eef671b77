#pragma once

#include "bifluid/fields.hpp"

namespace bifluid {

// Root of F(a) = d a^gamma + a - 1 on (0, 1); F is strictly increasing with
// F(0) = -1 and F(1) = d > 0, so the root is unique.
struct ClosureRoot {
  double alpha;
  double residual;
  int iterations;
};

// Bisection to bracket width 1e-8, then Newton polished to machine-level
// residual (contract: |F(alpha)| <= 1e-12).
ClosureRoot solve_alpha(double d, double gamma);

// Companion phase density under pressure equality: rho_minus =
// rho_plus^(gamma_plus/gamma_minus).
double companion_density(double rho_plus, double gamma_plus, double gamma_minus);

// Primitive variables recovered from the conserved fractional masses.
struct PrimitiveState {
  double alpha_plus;
  double alpha_minus;
  double rho_plus;
  double rho_minus;
  double rho;      // R_plus + R_minus
  double u[2];     // m / rho (zero in vacuum)
  double p;        // rho_plus^gamma_plus
};

inline constexpr double kVacuumThreshold = 1e-12;   // on R_plus + R_minus
inline constexpr double kDegenerateRatio = 1e-8;    // R_plus vs R_minus

PrimitiveState reconstruct(double r_plus, double r_minus, const double m[2],
                           int dim, const FluidParams& params);

// Volume fractions of the limit system read off the mixture density.
struct LimitFractions {
  double alpha_plus;
  double alpha_minus;
};

LimitFractions limit_alpha(double rho, double rho_plus, double rho_minus);

// Empirical Lipschitz estimate of d -> alpha(d) on [d_lo, d_hi]: max
// difference quotient over consecutive sample pairs, with the implicit-
// derivative bound x^gamma / (gamma d x^(gamma-1) + 1) evaluated alongside.
struct LipschitzReport {
  double max_ratio;
  double bound_max;  // max of the implicit-derivative bound at the samples
  double arg_lo;     // pair achieving max_ratio
  double arg_hi;
  int samples;
};

LipschitzReport lipschitz_probe(double gamma, double d_lo, double d_hi,
                                int samples);

}  // namespace bifluid
