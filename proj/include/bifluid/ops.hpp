#pragma once

#include "bifluid/fields.hpp"

namespace bifluid {

// Midpoint quadrature: sum of cell values times cell volume, fixed
// traversal order so results are bit-reproducible.
double integrate(const ScalarField& f);

double norm_l1(const ScalarField& f);
double norm_l2_sq(const ScalarField& f);
double norm_l2_sq(const VectorField& u);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double max_abs(const ScalarField& f);

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& u);

// Second-order central differences; one-sided closure at Dirichlet
// boundaries. divergence(gradient(f)) on periodic grids is the 5-point
// Laplacian on the doubled-spacing lattice.
ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);

// Ghost-cell content outside Dirichlet walls: mirror copies the adjacent
// interior value (zero-gradient), zero holds the no-slip velocity value.
enum class Ghost { mirror, zero };

// Compact 3-point (per axis) Laplacian used by the viscous terms.
ScalarField laplacian(const ScalarField& f, Ghost ghost);
VectorField laplacian(const VectorField& u);  // Ghost::zero on walls

// grad(div u) with compact second differences (mixed terms by nested
// central differences).
VectorField grad_div(const VectorField& u);

}  // namespace bifluid
