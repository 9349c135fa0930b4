#pragma once

#include <Eigen/Core>

#include "convexkit/errors.hpp"

namespace convexkit {

/// Interior-point grid on the unit interval (dim 1) or unit square (dim 2)
/// with zero boundary values. Interior unknowns are ordered row-major.
struct Grid {
  int dim = 1;
  int n_interior = 1;

  Grid(int dim_, int n_interior_) : dim(dim_), n_interior(n_interior_) {
    if (dim != 1 && dim != 2) {
      throw PreconditionError("Grid: dim must be 1 or 2");
    }
    if (n_interior < 1) {
      throw PreconditionError("Grid: n_interior must be >= 1");
    }
  }

  double spacing() const { return 1.0 / (n_interior + 1); }

  Eigen::Index unknowns() const {
    const Eigen::Index n = n_interior;
    return dim == 1 ? n : n * n;
  }
};

/// Applies the negative discrete Laplacian: 3-point stencil in 1D, 5-point
/// in 2D, scaled by 1/h^2. Symmetric positive definite on the zero-boundary
/// space.
Eigen::VectorXd apply_laplacian(const Grid& grid, const Eigen::VectorXd& u);

}  // namespace convexkit
