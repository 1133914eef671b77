#include "bifluid/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bifluid {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("ops: fields live on different grids");
}

// Value of f at (possibly out-of-range) cell index along one axis.
double ghost_value(const ScalarField& f, int axis, int i, int j, Ghost ghost) {
  const Grid& g = f.grid();
  int idx = axis == 0 ? i : j;
  if (g.bc(axis) == Boundary::periodic || (idx >= 0 && idx < g.n(axis)))
    return f.at(g.fold(0, i), g.fold(1, j));
  if (ghost == Ghost::zero) return 0.0;
  return f.at(g.fold(0, i), g.fold(1, j));  // fold clamps: mirror
}

}  // namespace

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data()) s += v;
  return s * f.grid().cell_volume();
}

double norm_l1(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data()) s += std::abs(v);
  return s * f.grid().cell_volume();
}

double norm_l2_sq(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data()) s += v * v;
  return s * f.grid().cell_volume();
}

double norm_l2_sq(const VectorField& u) {
  double s = norm_l2_sq(u.comp(0));
  if (u.dim() == 2) s += norm_l2_sq(u.comp(1));
  return s;
}

double min_value(const ScalarField& f) {
  return *std::min_element(f.data().begin(), f.data().end());
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.data().begin(), f.data().end());
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const ScalarField& f) {
  for (double v : f.data())
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const VectorField& u) {
  for (int d = 0; d < u.dim(); ++d)
    if (!all_finite(u.comp(d))) return false;
  return true;
}

namespace {

// Central first derivative along an axis, one-sided at Dirichlet walls.
double diff1(const ScalarField& f, int axis, int i, int j) {
  const Grid& g = f.grid();
  const int n = g.n(axis);
  const double h = g.h(axis);
  const int idx = axis == 0 ? i : j;
  const int ip = axis == 0 ? i + 1 : i;
  const int jp = axis == 0 ? j : j + 1;
  const int im = axis == 0 ? i - 1 : i;
  const int jm = axis == 0 ? j : j - 1;
  if (g.bc(axis) == Boundary::dirichlet) {
    if (idx == 0) return (f.at(g.fold(0, ip), g.fold(1, jp)) - f.at(i, j)) / h;
    if (idx == n - 1)
      return (f.at(i, j) - f.at(g.fold(0, im), g.fold(1, jm))) / h;
  }
  return (f.at(g.fold(0, ip), g.fold(1, jp)) -
          f.at(g.fold(0, im), g.fold(1, jm))) /
         (2.0 * h);
}

}  // namespace

ScalarField divergence(const VectorField& u) {
  const Grid& g = u.grid();
  ScalarField out(g);
  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      double s = diff1(u.comp(0), 0, i, j);
      if (g.dim() == 2) s += diff1(u.comp(1), 1, i, j);
      out.at(i, j) = s;
    }
  return out;
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      out.comp(0).at(i, j) = diff1(f, 0, i, j);
      if (g.dim() == 2) out.comp(1).at(i, j) = diff1(f, 1, i, j);
    }
  return out;
}

ScalarField laplacian(const ScalarField& f, Ghost ghost) {
  const Grid& g = f.grid();
  ScalarField out(g);
  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      double s = 0.0;
      const double c = f.at(i, j);
      s += (ghost_value(f, 0, i + 1, j, ghost) - 2.0 * c +
            ghost_value(f, 0, i - 1, j, ghost)) /
           (g.h(0) * g.h(0));
      if (g.dim() == 2)
        s += (ghost_value(f, 1, i, j + 1, ghost) - 2.0 * c +
              ghost_value(f, 1, i, j - 1, ghost)) /
             (g.h(1) * g.h(1));
      out.at(i, j) = s;
    }
  return out;
}

VectorField laplacian(const VectorField& u) {
  VectorField out(u.grid());
  for (int d = 0; d < u.dim(); ++d)
    out.comp(d) = laplacian(u.comp(d), Ghost::zero);
  return out;
}

namespace {

// d^2 f / (dx_a dx_b) with compact stencils; zero ghosts at walls.
double diff2_mixed(const ScalarField& f, int a, int b, int i, int j) {
  const Grid& g = f.grid();
  if (a == b) {
    const double h = g.h(a);
    const int di = a == 0 ? 1 : 0;
    const int dj = a == 0 ? 0 : 1;
    return (ghost_value(f, a, i + di, j + dj, Ghost::zero) - 2.0 * f.at(i, j) +
            ghost_value(f, a, i - di, j - dj, Ghost::zero)) /
           (h * h);
  }
  const double denom = 4.0 * g.h(0) * g.h(1);
  auto v = [&](int ii, int jj) {
    return f.at(g.fold(0, ii), g.fold(1, jj));
  };
  return (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) +
          v(i - 1, j - 1)) /
         denom;
}

}  // namespace

VectorField grad_div(const VectorField& u) {
  const Grid& g = u.grid();
  require_same_grid(g, u.comp(0).grid());
  VectorField out(g);
  for (int j = 0; j < (g.dim() == 2 ? g.n(1) : 1); ++j)
    for (int i = 0; i < g.n(0); ++i)
      for (int a = 0; a < g.dim(); ++a) {
        double s = 0.0;
        for (int b = 0; b < g.dim(); ++b)
          s += diff2_mixed(u.comp(b), a, b, i, j);
        out.comp(a).at(i, j) = s;
      }
  return out;
}

}  // namespace bifluid
