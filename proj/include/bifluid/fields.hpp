#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bifluid {

enum class Boundary { periodic, dirichlet };

// Uniform cell-centered grid, 1D or 2D. Cell i has center (i + 1/2) h.
class Grid {
public:
  static Grid make_1d(int n, double length, Boundary bc);
  static Grid make_2d(int nx, int ny, double lx, double ly);  // periodic only

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double length(int axis) const { return n_[axis] * h_[axis]; }
  Boundary bc(int axis) const { return bc_[axis]; }

  std::size_t cells() const { return cells_; }
  double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * n_[0] + i;
  }
  double center(int axis, int i) const { return (i + 0.5) * h_[axis]; }

  // Wraps (periodic) or clamps (dirichlet) a cell index along an axis.
  int fold(int axis, int i) const;

  bool operator==(const Grid& o) const;
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  Grid(int dim, std::array<int, 2> n, std::array<double, 2> h,
       std::array<Boundary, 2> bc);

  int dim_;
  std::array<int, 2> n_;
  std::array<double, 2> h_;
  std::array<Boundary, 2> bc_;
  std::size_t cells_;
};

class ScalarField {
public:
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid_(g), v_(g.cells(), fill) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }

  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }
  double& at(int i, int j = 0) { return v_[grid_.index(i, j)]; }
  double at(int i, int j = 0) const { return v_[grid_.index(i, j)]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

private:
  Grid grid_;
  std::vector<double> v_;
};

class VectorField {
public:
  explicit VectorField(const Grid& g, double fill = 0.0)
      : grid_(g), comp_{ScalarField(g, fill), ScalarField(g, fill)} {}

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }

  ScalarField& comp(int d) { return comp_[d]; }
  const ScalarField& comp(int d) const { return comp_[d]; }

private:
  Grid grid_;
  std::array<ScalarField, 2> comp_;
};

// Physical constants of the two-phase model. gamma_plus/minus are the
// adiabatic exponents, eps the Mach scaling, c0 the limit pressure constant.
struct FluidParams {
  double gamma_plus;
  double gamma_minus;
  double mu;
  double lambda;
  double eps;
  double c0;

  FluidParams(double gp, double gm, double mu_, double lambda_, double eps_,
              double c0_);

  double rho_plus_limit() const;   // c0^(1/gamma_plus)
  double rho_minus_limit() const;  // c0^(1/gamma_minus)

  FluidParams with_eps(double e) const {
    FluidParams p = *this;
    p.eps = e;
    return p;
  }
};

}  // namespace bifluid
