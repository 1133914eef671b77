#include "bifluid/closure.hpp"

#include <cmath>
#include <stdexcept>

namespace bifluid {

ClosureRoot solve_alpha(double d, double gamma) {
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::invalid_argument("solve_alpha: d must be positive and finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("solve_alpha: gamma must be positive");

  // Newton on L = ln a. G(L) = d e^(gamma L) + e^L - 1 is convex and
  // increasing, so iterates started right of the root descend to it
  // monotonically; the log variable keeps arbitrarily small roots exact in
  // relative terms. Initial point: where the d-term alone equals 1 (d >= 1),
  // else a = 1; both keep G > 0.
  double L = d >= 1.0 ? -std::log(d) / gamma : 0.0;
  double g = d * std::exp(gamma * L) + std::exp(L) - 1.0;
  int iters = 0;
  while (std::abs(g) > 1e-14 && iters < 200) {
    const double gp = gamma * d * std::exp(gamma * L) + std::exp(L);
    const double next = L - g / gp;
    if (next == L) break;
    L = next;
    g = d * std::exp(gamma * L) + std::exp(L) - 1.0;
    ++iters;
  }
  const double a = std::exp(L);
  return {a, d * std::pow(a, gamma) + a - 1.0, iters};
}

double companion_density(double rho_plus, double gamma_plus,
                         double gamma_minus) {
  if (rho_plus < 0.0)
    throw std::invalid_argument("companion_density: negative density");
  return std::pow(rho_plus, gamma_plus / gamma_minus);
}

PrimitiveState reconstruct(double r_plus, double r_minus, const double m[2],
                           int dim, const FluidParams& params) {
  if (r_plus < 0.0 || r_minus < 0.0)
    throw std::invalid_argument("reconstruct: negative fractional mass");

  PrimitiveState s{};
  s.rho = r_plus + r_minus;

  if (s.rho < kVacuumThreshold) {
    s.alpha_plus = 0.5;
    s.alpha_minus = 0.5;
    return s;  // densities, velocity, pressure all zero
  }

  const double gp = params.gamma_plus, gm = params.gamma_minus;
  if (r_minus <= kDegenerateRatio * r_plus) {
    // single-phase +: the companion density is virtual
    s.alpha_plus = 1.0;
    s.alpha_minus = 0.0;
    s.rho_plus = r_plus;
    s.rho_minus = companion_density(s.rho_plus, gp, gm);
  } else if (r_plus <= kDegenerateRatio * r_minus) {
    // single-phase -: d = r_minus / r_plus^gamma would overflow
    s.alpha_plus = 0.0;
    s.alpha_minus = 1.0;
    s.rho_minus = r_minus;
    s.rho_plus = std::pow(r_minus, gm / gp);
  } else {
    // The root equation is self-dual: swapping phases maps (d, gamma, a) to
    // (r_plus / r_minus^(1/gamma), 1/gamma, 1 - a). Solve for whichever
    // fraction is <= 1/2 (exactly when d >= 2^(gamma-1)) so the complement
    // 1 - a loses no precision, then recover each phase density from its own
    // fraction; both round trips r = alpha rho are then exact to roundoff.
    const double gamma = gp / gm;
    const double d = r_minus / std::pow(r_plus, gamma);
    if (d >= std::pow(2.0, gamma - 1.0)) {
      s.alpha_plus = solve_alpha(d, gamma).alpha;
      s.alpha_minus = 1.0 - s.alpha_plus;
    } else {
      const double dual = r_plus / std::pow(r_minus, 1.0 / gamma);
      s.alpha_minus = solve_alpha(dual, 1.0 / gamma).alpha;
      s.alpha_plus = 1.0 - s.alpha_minus;
    }
    s.rho_plus = r_plus / s.alpha_plus;
    s.rho_minus = r_minus / s.alpha_minus;
  }

  s.p = std::pow(s.rho_plus, gp);
  s.u[0] = m[0] / s.rho;
  if (dim == 2) s.u[1] = m[1] / s.rho;
  return s;
}

LimitFractions limit_alpha(double rho, double rho_plus, double rho_minus) {
  if (rho_plus == rho_minus)
    throw std::invalid_argument("limit_alpha: phase densities coincide");
  const double lo = std::min(rho_plus, rho_minus);
  const double hi = std::max(rho_plus, rho_minus);
  if (rho < lo || rho > hi)
    throw std::invalid_argument("limit_alpha: mixture density outside phase range");
  const double ap = (rho - rho_minus) / (rho_plus - rho_minus);
  return {ap, 1.0 - ap};
}

LipschitzReport lipschitz_probe(double gamma, double d_lo, double d_hi,
                                int samples) {
  if (!(d_lo > 0.0) || !(d_hi > d_lo))
    throw std::invalid_argument("lipschitz_probe: need 0 < d_lo < d_hi");
  if (samples < 2)
    throw std::invalid_argument("lipschitz_probe: need at least 2 samples");

  LipschitzReport rep{0.0, 0.0, d_lo, d_hi, samples};
  const double step = (d_hi - d_lo) / (samples - 1);
  double prev_d = d_lo;
  double prev_a = solve_alpha(prev_d, gamma).alpha;
  {
    const double b = std::pow(prev_a, gamma) /
                     (gamma * prev_d * std::pow(prev_a, gamma - 1.0) + 1.0);
    rep.bound_max = b;
  }
  for (int k = 1; k < samples; ++k) {
    const double dk = d_lo + k * step;
    if (dk == prev_d) continue;  // zero-gap pair
    const double ak = solve_alpha(dk, gamma).alpha;
    const double ratio = std::abs(ak - prev_a) / (dk - prev_d);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.arg_lo = prev_d;
      rep.arg_hi = dk;
    }
    const double b = std::pow(ak, gamma) /
                     (gamma * dk * std::pow(ak, gamma - 1.0) + 1.0);
    if (b > rep.bound_max) rep.bound_max = b;
    prev_d = dk;
    prev_a = ak;
  }
  return rep;
}

}  // namespace bifluid
