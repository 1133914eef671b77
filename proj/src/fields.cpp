#include "bifluid/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace bifluid {

Grid::Grid(int dim, std::array<int, 2> n, std::array<double, 2> h,
           std::array<Boundary, 2> bc)
    : dim_(dim), n_(n), h_(h), bc_(bc) {
  for (int a = 0; a < dim_; ++a) {
    if (n_[a] < 4) throw std::invalid_argument("grid: need >= 4 cells per axis");
    if (!(h_[a] > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  }
  cells_ = static_cast<std::size_t>(n_[0]) * (dim_ == 2 ? n_[1] : 1);
}

Grid Grid::make_1d(int n, double length, Boundary bc) {
  if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
  return Grid(1, {n, 1}, {length / n, 1.0}, {bc, bc});
}

Grid Grid::make_2d(int nx, int ny, double lx, double ly) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("grid: lengths must be positive");
  return Grid(2, {nx, ny}, {lx / nx, ly / ny},
              {Boundary::periodic, Boundary::periodic});
}

int Grid::fold(int axis, int i) const {
  const int n = n_[axis];
  if (bc_[axis] == Boundary::periodic) {
    i %= n;
    if (i < 0) i += n;
    return i;
  }
  if (i < 0) return 0;
  if (i >= n) return n - 1;
  return i;
}

bool Grid::operator==(const Grid& o) const {
  if (dim_ != o.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (n_[a] != o.n_[a] || h_[a] != o.h_[a] || bc_[a] != o.bc_[a]) return false;
  return true;
}

FluidParams::FluidParams(double gp, double gm, double mu_, double lambda_,
                         double eps_, double c0_)
    : gamma_plus(gp), gamma_minus(gm), mu(mu_), lambda(lambda_), eps(eps_),
      c0(c0_) {
  if (!(gamma_plus >= 2.0) || !(gamma_minus >= 2.0))
    throw std::invalid_argument("params: adiabatic exponents must be >= 2");
  if (!(mu > 0.0)) throw std::invalid_argument("params: mu must be positive");
  if (!(lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument("params: lambda + 2 mu must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("params: eps must be positive");
  if (!(c0 > 0.0)) throw std::invalid_argument("params: c0 must be positive");
}

double FluidParams::rho_plus_limit() const {
  return std::pow(c0, 1.0 / gamma_plus);
}

double FluidParams::rho_minus_limit() const {
  return std::pow(c0, 1.0 / gamma_minus);
}

}  // namespace bifluid
