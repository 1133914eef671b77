#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bifluid/closure.hpp"

using namespace bifluid;

namespace {

// Independent long-double bisection oracle for d a^g + a - 1 = 0.
double oracle_alpha(double d, double gamma) {
  long double lo = 0.0L, hi = 1.0L;
  for (int k = 0; k < 200; ++k) {
    const long double mid = 0.5L * (lo + hi);
    const long double f =
        static_cast<long double>(d) * std::pow(mid, static_cast<long double>(gamma)) +
        mid - 1.0L;
    (f < 0.0L ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace

TEST_CASE("closed-form roots") {
  // d = 1, gamma = 2: a^2 + a - 1 = 0
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(std::abs(solve_alpha(1.0, 2.0).alpha - golden) <= 1e-12);
  // d = 2, gamma = 2: (2a - 1)(a + 1) = 0
  CHECK(std::abs(solve_alpha(2.0, 2.0).alpha - 0.5) <= 1e-12);
  // gamma = 1: (d + 1) a = 1
  CHECK(std::abs(solve_alpha(3.0, 1.0).alpha - 0.25) <= 1e-12);
}

TEST_CASE("root matches the independent oracle across the parameter box") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> log_d(std::log(1e-4), std::log(1e4));
  std::uniform_real_distribution<double> gam(0.25, 4.0);
  for (int t = 0; t < 500; ++t) {
    const double d = std::exp(log_d(rng));
    const double g = gam(rng);
    const ClosureRoot root = solve_alpha(d, g);
    CHECK(std::abs(root.alpha - oracle_alpha(d, g)) <= 1e-11);
    CHECK(std::abs(root.residual) <= 1e-12);
    CHECK(root.alpha > 0.0);
    CHECK(root.alpha < 1.0);
  }
}

TEST_CASE("root is strictly decreasing in d") {
  double prev = solve_alpha(1e-3, 1.7).alpha;
  for (double d = 2e-3; d < 1e3; d *= 2.0) {
    const double a = solve_alpha(d, 1.7).alpha;
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("solve_alpha rejects bad arguments") {
  CHECK_THROWS(solve_alpha(0.0, 2.0));
  CHECK_THROWS(solve_alpha(-1.0, 2.0));
  CHECK_THROWS(solve_alpha(1.0, 0.0));
  CHECK_THROWS(solve_alpha(std::nan(""), 2.0));
}

TEST_CASE("companion density") {
  CHECK(companion_density(2.0, 4.0, 2.0) == doctest::Approx(4.0));
  CHECK(companion_density(0.0, 4.0, 2.0) == doctest::Approx(0.0));
  CHECK(companion_density(3.0, 2.0, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS(companion_density(-1.0, 4.0, 2.0));
}

TEST_CASE("reconstruct golden case") {
  const FluidParams params(4.0, 2.0, 1e-2, 0.0, 0.1, 1.0);
  const double m[2] = {3.0, -1.0};
  const PrimitiveState s = reconstruct(1.0, 1.0, m, 2, params);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(s.rho_plus == doctest::Approx(phi).epsilon(1e-12));
  CHECK(s.rho_minus == doctest::Approx(phi * phi).epsilon(1e-12));
  CHECK(s.alpha_plus == doctest::Approx(1.0 / phi).epsilon(1e-12));
  CHECK(s.rho == doctest::Approx(2.0));
  CHECK(s.u[0] == doctest::Approx(1.5));
  CHECK(s.u[1] == doctest::Approx(-0.5));
  CHECK(s.p == doctest::Approx(std::pow(phi, 4.0)).epsilon(1e-12));
}

TEST_CASE("reconstruct round trip and pressure equality") {
  const FluidParams params(4.0, 2.0, 1e-2, 0.0, 0.1, 1.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> log_r(std::log(1e-3), std::log(1e3));
  const double m[2] = {0.0, 0.0};
  for (int t = 0; t < 2000; ++t) {
    const double rp = std::exp(log_r(rng));
    const double rm = std::exp(log_r(rng));
    const PrimitiveState s = reconstruct(rp, rm, m, 2, params);
    CHECK(s.alpha_plus + s.alpha_minus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.alpha_plus * s.rho_plus == doctest::Approx(rp).epsilon(1e-10));
    if (s.alpha_minus > 0.0)
      CHECK(s.alpha_minus * s.rho_minus == doctest::Approx(rm).epsilon(1e-10));
    const double pp = std::pow(s.rho_plus, params.gamma_plus);
    const double pm = std::pow(s.rho_minus, params.gamma_minus);
    CHECK(std::abs(pp - pm) <= 1e-10 * std::max(1.0, pp));
  }
}

TEST_CASE("vacuum and single-phase conventions") {
  const FluidParams params(4.0, 2.0, 1e-2, 0.0, 0.1, 1.0);
  const double m[2] = {0.5, 0.0};

  const PrimitiveState vac = reconstruct(0.0, 0.0, m, 2, params);
  CHECK(vac.alpha_plus == doctest::Approx(0.5));
  CHECK(vac.rho_plus == 0.0);
  CHECK(vac.rho_minus == 0.0);
  CHECK(vac.u[0] == 0.0);
  CHECK(vac.p == 0.0);

  const PrimitiveState plus = reconstruct(2.0, 0.0, m, 2, params);
  CHECK(plus.alpha_plus == doctest::Approx(1.0));
  CHECK(plus.rho_plus == doctest::Approx(2.0));
  CHECK(plus.rho_minus == doctest::Approx(4.0));  // virtual companion
  CHECK(plus.u[0] == doctest::Approx(0.25));

  const PrimitiveState minus = reconstruct(0.0, 3.0, m, 2, params);
  CHECK(minus.alpha_minus == doctest::Approx(1.0));
  CHECK(minus.rho_minus == doctest::Approx(3.0));
  CHECK(minus.rho_plus == doctest::Approx(std::sqrt(3.0)));

  CHECK_THROWS(reconstruct(-1.0, 1.0, m, 2, params));
}

TEST_CASE("reconstruct is continuous across the degenerate threshold") {
  const FluidParams params(4.0, 2.0, 1e-2, 0.0, 0.1, 1.0);
  const double m[2] = {0.0, 0.0};
  const double rm = 1e-8 * 2.0;  // just at the branch switch for r_plus = 2
  const PrimitiveState a = reconstruct(2.0, rm * 0.999, m, 2, params);
  const PrimitiveState b = reconstruct(2.0, rm * 1.001, m, 2, params);
  CHECK(std::abs(a.rho_plus - b.rho_plus) <= 1e-6);
  CHECK(std::abs(a.alpha_plus - b.alpha_plus) <= 1e-6);
}

TEST_CASE("limit fractions") {
  const LimitFractions f = limit_alpha(1.5, 2.0, 1.0);
  CHECK(f.alpha_plus == doctest::Approx(0.5));
  CHECK(f.alpha_minus == doctest::Approx(0.5));
  CHECK(limit_alpha(2.0, 2.0, 1.0).alpha_plus == doctest::Approx(1.0));
  CHECK(limit_alpha(1.0, 2.0, 1.0).alpha_plus == doctest::Approx(0.0));
  CHECK_THROWS(limit_alpha(1.5, 1.0, 1.0));
  CHECK_THROWS(limit_alpha(3.0, 2.0, 1.0));
}

TEST_CASE("lipschitz probe brackets the implicit-derivative bound") {
  const LipschitzReport rep = lipschitz_probe(2.0, 1.0, 2.0, 2000);
  // |a'(d)| = a^2 / (2 d a + 1) is largest at d = 1 where a = (sqrt5-1)/2
  const double a1 = (std::sqrt(5.0) - 1.0) / 2.0;
  const double deriv1 = a1 * a1 / (2.0 * a1 + 1.0);
  CHECK(rep.max_ratio == doctest::Approx(deriv1).epsilon(1e-3));
  CHECK(rep.max_ratio <= rep.bound_max * (1.0 + 1e-9));
  CHECK(rep.bound_max == doctest::Approx(deriv1).epsilon(1e-6));
  CHECK(rep.samples == 2000);
  CHECK_THROWS(lipschitz_probe(2.0, 2.0, 1.0, 100));
  CHECK_THROWS(lipschitz_probe(2.0, 1.0, 2.0, 1));
}
