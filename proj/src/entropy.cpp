#include "bifluid/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace bifluid {

double h_relative(double rho, double r, double gamma) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("h_relative: gamma must exceed 1");
  if (!(r > 0.0))
    throw std::invalid_argument("h_relative: reference density must be positive");
  if (rho < 0.0)
    throw std::invalid_argument("h_relative: negative density");

  // h = r^gamma psi(t) / (gamma - 1), t = rho/r - 1, with
  // psi(t) = (1+t)^gamma - 1 - gamma t. The closed form cancels
  // catastrophically for rho near r, which is exactly where the
  // diagnostics operate, so for |t| <= 1/2 psi is summed as its binomial
  // series sum_{k>=2} C(gamma,k) t^k instead (terminates for integer
  // gamma, geometric tail otherwise).
  const double t = (rho - r) / r;
  double psi;
  if (std::abs(t) <= 0.5) {
    double term = 0.5 * gamma * (gamma - 1.0) * t * t;
    psi = term;
    for (int k = 2; k < 200; ++k) {
      term *= (gamma - k) * t / (k + 1);
      const double next = psi + term;
      if (next == psi) break;
      psi = next;
    }
  } else {
    psi = std::pow(1.0 + t, gamma) - 1.0 - gamma * t;
  }
  return std::pow(r, gamma) * psi / (gamma - 1.0);
}

ScalarField LimitState::r_plus() const {
  ScalarField out(alpha_plus.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = alpha_plus[k] * rho_plus;
  return out;
}

ScalarField LimitState::r_minus() const {
  ScalarField out(alpha_plus.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (1.0 - alpha_plus[k]) * rho_minus;
  return out;
}

ScalarField LimitState::mixture_rho() const {
  ScalarField out(alpha_plus.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = alpha_plus[k] * rho_plus + (1.0 - alpha_plus[k]) * rho_minus;
  return out;
}

LimitState LimitTrajectory::at(double t) const {
  if (times.empty())
    throw std::invalid_argument("trajectory: no snapshots recorded");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  std::size_t k = 1;
  while (times[k] < t) ++k;
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  LimitState out = states[k - 1];
  for (std::size_t c = 0; c < out.alpha_plus.size(); ++c)
    out.alpha_plus[c] += w * (states[k].alpha_plus[c] - out.alpha_plus[c]);
  for (int d = 0; d < out.u.dim(); ++d)
    for (std::size_t c = 0; c < out.u.comp(d).size(); ++c)
      out.u.comp(d)[c] += w * (states[k].u.comp(d)[c] - out.u.comp(d)[c]);
  return out;
}

double e1(const PrimitiveField& comp, const LimitState& limit,
          const FluidParams& params) {
  const Grid& g = comp.rho.grid();
  if (g != limit.alpha_plus.grid())
    throw std::invalid_argument("e1: states live on different grids");

  double kinetic = 0.0;
  double potential = 0.0;
  const int dim = g.dim();
  for (std::size_t k = 0; k < comp.rho.size(); ++k) {
    double du2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double dv = comp.u.comp(d)[k] - limit.u.comp(d)[k];
      du2 += dv * dv;
    }
    kinetic += 0.5 * comp.rho[k] * du2;
    potential +=
        comp.alpha_plus[k] *
            h_relative(comp.rho_plus[k], limit.rho_plus, params.gamma_plus) +
        (1.0 - comp.alpha_plus[k]) *
            h_relative(comp.rho_minus[k], limit.rho_minus, params.gamma_minus);
  }
  const double vol = g.cell_volume();
  return kinetic * vol + potential * vol / (params.eps * params.eps);
}

double e2(const ScalarField& r_plus_eps, const ScalarField& r_minus_eps,
          const ScalarField& r_plus, const ScalarField& r_minus) {
  const Grid& g = r_plus_eps.grid();
  if (g != r_minus_eps.grid() || g != r_plus.grid() || g != r_minus.grid())
    throw std::invalid_argument("e2: fields live on different grids");

  auto one_phase = [](const ScalarField& fe, const ScalarField& fl) {
    double s = 0.0;
    for (std::size_t k = 0; k < fe.size(); ++k) {
      if (!(fl[k] > 0.0))
        throw std::invalid_argument("e2: limit field must be positive");
      if (fe[k] < 0.0)
        throw std::invalid_argument("e2: negative fractional mass");
      if (fe[k] > fl[k]) s += fe[k] * std::log(fe[k] / fl[k]);
    }
    return s;
  };
  return (one_phase(r_plus_eps, r_plus) + one_phase(r_minus_eps, r_minus)) *
         g.cell_volume();
}

double energy(const PrimitiveField& state, const FluidParams& params) {
  const Grid& g = state.rho.grid();
  double kinetic = 0.0;
  double internal = 0.0;
  const int dim = g.dim();
  for (std::size_t k = 0; k < state.rho.size(); ++k) {
    double u2 = 0.0;
    for (int d = 0; d < dim; ++d) u2 += state.u.comp(d)[k] * state.u.comp(d)[k];
    kinetic += 0.5 * state.rho[k] * u2;
    internal += state.alpha_plus[k] *
                    std::pow(state.rho_plus[k], params.gamma_plus) /
                    (params.gamma_plus - 1.0) +
                (1.0 - state.alpha_plus[k]) *
                    std::pow(state.rho_minus[k], params.gamma_minus) /
                    (params.gamma_minus - 1.0);
  }
  const double vol = g.cell_volume();
  return kinetic * vol + internal * vol / (params.eps * params.eps);
}

CkpReport ckp_check(const ScalarField& f, const ScalarField& g) {
  if (f.grid() != g.grid())
    throw std::invalid_argument("ckp_check: fields live on different grids");

  const double mass_f = integrate(f);
  const double mass_g = integrate(g);
  const double scale = std::max({1.0, std::abs(mass_f), std::abs(mass_g)});
  if (std::abs(mass_f - mass_g) > 1e-10 * scale)
    throw std::invalid_argument("ckp_check: masses differ beyond tolerance");

  double l1 = 0.0, ent = 0.0, abslog = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] < 0.0 || !(g[k] > 0.0))
      throw std::invalid_argument("ckp_check: need f >= 0 and g > 0");
    l1 += std::abs(f[k] - g[k]);
    if (f[k] > 0.0) {
      const double lr = std::log(f[k] / g[k]);
      if (lr > 0.0) ent += f[k] * lr;
      abslog += f[k] * std::abs(lr);
    }
  }
  const double vol = f.grid().cell_volume();
  CkpReport rep{};
  rep.l1_diff = l1 * vol;
  rep.entropy = ent * vol;
  rep.abs_log = abslog * vol;
  rep.mass_mismatch = mass_f - mass_g;
  const double slack = std::abs(rep.mass_mismatch) + 1e-14 * scale;
  rep.factor1_holds = rep.l1_diff <= rep.entropy + slack;
  rep.factor2_ok = rep.l1_diff <= 2.0 * rep.entropy + slack;
  rep.factor3_ok = rep.abs_log <= 3.0 * rep.entropy + slack;
  return rep;
}

SandwichReport sandwich_check(const std::vector<double>& rho_samples,
                              double r_lo, double r_hi, double gamma,
                              int r_samples) {
  if (rho_samples.empty())
    throw std::invalid_argument("sandwich_check: empty sample set");
  if (!(r_lo > 0.0) || !(r_hi >= r_lo))
    throw std::invalid_argument("sandwich_check: need 0 < r_lo <= r_hi");
  if (r_samples < 1)
    throw std::invalid_argument("sandwich_check: need at least one r sample");

  SandwichReport rep{1e300, 0.0, 0, 0};
  for (int j = 0; j < r_samples; ++j) {
    const double r = r_samples == 1
                         ? r_lo
                         : r_lo + (r_hi - r_lo) * j / (r_samples - 1);
    for (double rho : rho_samples) {
      if (rho == r) continue;  // H and bracket both vanish
      const double diff = std::abs(rho - r);
      const double bracket =
          diff < 1.0 ? diff * diff : std::pow(diff, gamma);
      const double ratio = h_relative(rho, r, gamma) / bracket;
      ++rep.pairs;
      if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        ++rep.violations;
        continue;
      }
      if (ratio < rep.c1) rep.c1 = ratio;
      if (ratio > rep.c2) rep.c2 = ratio;
    }
  }
  if (rep.pairs == 0)
    throw std::invalid_argument("sandwich_check: all samples coincide with r");
  return rep;
}

L2ByL1Report l2_by_l1_check(const PrimitiveField& comp, const LimitState& limit,
                            const FluidParams& params) {
  const double a_min = min_value(limit.alpha_plus);
  const double a_max = max_value(limit.alpha_plus);
  if (!(a_min > 0.0) || !(a_max < 1.0))
    throw std::invalid_argument(
        "l2_by_l1_check: limit fraction must stay inside (0, 1)");

  const Grid& g = comp.rho.grid();
  const ScalarField rp_lim = limit.r_plus();
  const ScalarField rm_lim = limit.r_minus();

  ScalarField dp(g), dm(g);
  for (std::size_t k = 0; k < dp.size(); ++k) {
    dp[k] = comp.alpha_plus[k] * comp.rho_plus[k] - rp_lim[k];
    dm[k] = (1.0 - comp.alpha_plus[k]) * comp.rho_minus[k] - rm_lim[k];
  }

  L2ByL1Report rep{};
  rep.lhs_plus = norm_l2_sq(dp);
  rep.lhs_minus = norm_l2_sq(dm);
  rep.denominator = params.eps * params.eps * e1(comp, limit, params) +
                    norm_l1(dp) + norm_l1(dm);
  const double lhs = std::max(rep.lhs_plus, rep.lhs_minus);
  rep.ratio = lhs == 0.0 ? 0.0 : lhs / rep.denominator;
  rep.ok = rep.ratio <= kL2ByL1FrozenC;
  return rep;
}

}  // namespace bifluid
