#include "convexkit/dirichlet.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace convexkit {

namespace {

constexpr double kPi = std::numbers::pi;

Vector node_samples_1d(const Grid& grid, const std::function<double(double)>& f) {
  const double h = grid.spacing();
  Vector v(grid.unknowns());
  for (int i = 0; i < grid.n_interior; ++i) v[i] = f((i + 1) * h);
  return v;
}

Vector node_samples_2d(const Grid& grid,
                       const std::function<double(double, double)>& f) {
  const double h = grid.spacing();
  const int n = grid.n_interior;
  Vector v(grid.unknowns());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v[i * n + j] = f((i + 1) * h, (j + 1) * h);
    }
  }
  return v;
}

}  // namespace

DirichletProblem::DirichletProblem(Grid grid, Vector rhs)
    : grid_(grid), rhs_(std::move(rhs)) {
  check_vector(rhs_, "rhs");
  require_same_dim(rhs_.size(), grid_.unknowns(), "DirichletProblem");
}

Vector DirichletProblem::apply(const Vector& u) const {
  return apply_laplacian(grid_, u);
}

DirichletProblem build_problem(int dim, int n_interior, const LoadSpec& rhs) {
  Grid grid(dim, n_interior);
  Vector f = std::visit(
      [&](const auto& spec) -> Vector {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ConstantLoad>) {
          return Vector::Constant(grid.unknowns(), spec.value);
        } else if constexpr (std::is_same_v<T, SampledLoad>) {
          require_same_dim(spec.values.size(), grid.unknowns(),
                           "build_problem rhs samples");
          return spec.values;
        } else {
          if (spec.name == "sin") {
            if (dim != 1) {
              throw PreconditionError("manufactured \"sin\" is 1D");
            }
            return node_samples_1d(
                grid, [](double x) { return kPi * kPi * std::sin(kPi * x); });
          }
          if (spec.name == "sinsin") {
            if (dim != 2) {
              throw PreconditionError("manufactured \"sinsin\" is 2D");
            }
            return node_samples_2d(grid, [](double x, double y) {
              return 2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
            });
          }
          throw PreconditionError("unknown manufactured load \"" + spec.name +
                                  "\"");
        }
      },
      rhs);
  return DirichletProblem(grid, std::move(f));
}

Vector manufactured_solution(const Grid& grid, const std::string& name) {
  if (name == "sin") {
    if (grid.dim != 1) throw PreconditionError("manufactured \"sin\" is 1D");
    return node_samples_1d(grid, [](double x) { return std::sin(kPi * x); });
  }
  if (name == "sinsin") {
    if (grid.dim != 2) throw PreconditionError("manufactured \"sinsin\" is 2D");
    return node_samples_2d(grid, [](double x, double y) {
      return std::sin(kPi * x) * std::sin(kPi * y);
    });
  }
  throw PreconditionError("unknown manufactured load \"" + name + "\"");
}

double energy(const DirichletProblem& problem, const Vector& u) {
  require_same_dim(u.size(), problem.grid().unknowns(), "energy");
  return 0.5 * u.dot(problem.apply(u)) - problem.rhs().dot(u);
}

Vector energy_gradient(const DirichletProblem& problem, const Vector& u) {
  require_same_dim(u.size(), problem.grid().unknowns(), "energy_gradient");
  return problem.apply(u) - problem.rhs();
}

SolveReport solve_energy(const DirichletProblem& problem,
                         const SolveOptions& opts) {
  const Vector u0 = Vector::Zero(problem.grid().unknowns());
  return minimize_descent(
      [&](const Vector& u) { return energy(problem, u); },
      [&](const Vector& u) { return energy_gradient(problem, u); }, u0, opts);
}

CgResult cg_solve(const DirichletProblem& problem, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("cg_solve: tol must be > 0");
  const Vector& f = problem.rhs();
  const Eigen::Index n = f.size();
  const double f_norm = f.norm();

  CgResult result;
  result.u = Vector::Zero(n);
  if (f_norm == 0.0) return result;

  Vector r = f;  // residual of u = 0
  Vector p = r;
  double rr = r.squaredNorm();
  const long max_iters = 10L * static_cast<long>(n);

  for (long k = 0; k < max_iters; ++k) {
    if (std::sqrt(rr) / f_norm <= tol) break;
    const Vector lp = problem.apply(p);
    const double alpha = rr / p.dot(lp);
    result.u += alpha * p;
    r -= alpha * lp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    result.iterations = static_cast<int>(k + 1);
  }

  result.relative_residual = std::sqrt(rr) / f_norm;
  if (result.relative_residual > tol) {
    throw NumericError("cg_solve: no convergence after 10 * unknowns "
                       "iterations (relative residual " +
                       std::to_string(result.relative_residual) + ")");
  }
  return result;
}

Vector cg_oracle(const DirichletProblem& problem, double tol) {
  return cg_solve(problem, tol).u;
}

ComparisonRecord compare(const DirichletProblem& problem,
                         const SolveOptions& opts) {
  ComparisonRecord record;
  SolveReport energy_run = solve_energy(problem, opts);
  CgResult cg = cg_solve(problem, std::min(1e-12, opts.grad_tol));

  record.u_energy = energy_run.x_star;
  record.u_cg = cg.u;
  record.max_gap = (record.u_energy - record.u_cg).cwiseAbs().maxCoeff();
  record.energy_energy = energy_run.f_star;
  record.energy_cg = energy(problem, cg.u);
  record.energy_iterations = energy_run.iterations;
  record.cg_iterations = cg.iterations;
  return record;
}

Eigen::MatrixXd assemble_dense(const DirichletProblem& problem) {
  const Eigen::Index n = problem.grid().unknowns();
  if (n > 10000) {
    throw PreconditionError("assemble_dense: limited to 10^4 unknowns");
  }
  Eigen::MatrixXd L(n, n);
  Vector e = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    L.col(j) = problem.apply(e);
    e[j] = 0.0;
  }
  return L;
}

}  // namespace convexkit
