#include "convexkit/grid.hpp"

namespace convexkit {

Eigen::VectorXd apply_laplacian(const Grid& grid, const Eigen::VectorXd& u) {
  require_same_dim(u.size(), grid.unknowns(), "apply_laplacian");
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const Eigen::Index n = grid.n_interior;
  Eigen::VectorXd out(u.size());

  if (grid.dim == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = 2.0 * u[i];
      if (i > 0) v -= u[i - 1];
      if (i + 1 < n) v -= u[i + 1];
      out[i] = v * inv_h2;
    }
    return out;
  }

  // 2D row-major: unknown (i, j) at index i * n + j; boundary values are 0.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index k = i * n + j;
      double v = 4.0 * u[k];
      if (i > 0) v -= u[k - n];
      if (i + 1 < n) v -= u[k + n];
      if (j > 0) v -= u[k - 1];
      if (j + 1 < n) v -= u[k + 1];
      out[k] = v * inv_h2;
    }
  }
  return out;
}

}  // namespace convexkit
