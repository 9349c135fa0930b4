#pragma once

#include <string>
#include <variant>

#include "convexkit/grid.hpp"
#include "convexkit/minimize.hpp"

namespace convexkit {

struct ConstantLoad {
  double value;
};

struct SampledLoad {
  Vector values;  // one per interior unknown, row-major
};

/// Catalog pair (u_exact, f = -lap u_exact): "sin" in 1D, "sinsin" in 2D.
struct ManufacturedLoad {
  std::string name;
};

using LoadSpec = std::variant<ConstantLoad, SampledLoad, ManufacturedLoad>;

/// Discretized Poisson problem -lap u = f with zero boundary values on the
/// unit interval/square. The stencil operator is applied matrix-free.
class DirichletProblem {
 public:
  DirichletProblem(Grid grid, Vector rhs);

  const Grid& grid() const { return grid_; }
  const Vector& rhs() const { return rhs_; }

  /// L u (5-point/3-point stencil scaled by 1/h^2).
  Vector apply(const Vector& u) const;

 private:
  Grid grid_;
  Vector rhs_;
};

DirichletProblem build_problem(int dim, int n_interior, const LoadSpec& rhs);

/// Discrete Dirichlet energy J(u) = 1/2 <u, L u> - <f, u>; strictly convex.
double energy(const DirichletProblem& problem, const Vector& u);

/// Gradient of the energy, L u - f; zero exactly at the discrete solution.
Vector energy_gradient(const DirichletProblem& problem, const Vector& u);

/// Minimizes the energy by gradient descent. A GradTol exit certifies the
/// discrete Euler-Lagrange equation ||L u - f|| <= grad_tol.
SolveReport solve_energy(const DirichletProblem& problem,
                         const SolveOptions& opts = {});

struct CgResult {
  Vector u;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate-gradient solve of L u = f to relative residual <= tol; an
/// independent code path from solve_energy. Throws NumericError after
/// 10 * unknowns iterations without convergence.
CgResult cg_solve(const DirichletProblem& problem, double tol);

/// Convenience wrapper returning just the CG solution vector.
Vector cg_oracle(const DirichletProblem& problem, double tol);

struct ComparisonRecord {
  Vector u_energy;
  Vector u_cg;
  double max_gap = 0.0;  // ||u_energy - u_cg||_inf
  double energy_energy = 0.0;
  double energy_cg = 0.0;
  int energy_iterations = 0;
  int cg_iterations = 0;
};

/// Runs both solve_energy and cg_solve and reports the max-norm gap,
/// energies and iteration counts.
ComparisonRecord compare(const DirichletProblem& problem,
                         const SolveOptions& opts = {});

/// Exact manufactured solution sampled at the interior nodes. Throws on an
/// unknown name or a dim mismatch.
Vector manufactured_solution(const Grid& grid, const std::string& name);

/// Dense stencil matrix for tests; refuses sizes above 10^4 unknowns.
Eigen::MatrixXd assemble_dense(const DirichletProblem& problem);

}  // namespace convexkit
