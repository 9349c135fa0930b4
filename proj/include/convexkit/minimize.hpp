#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "convexkit/functions.hpp"

namespace convexkit {

// Tolerances below sqrt(eps * |f(x*)|) are generally unreachable: the Armijo
// test compares rounded objective values, so true decrements smaller than the
// evaluation roundoff cannot be told apart from noise. With f* of order one
// that floor sits near 1e-8; pass grad_tol/fixedpoint_tol at or above 1e-7
// when the optimal value is not close to zero.
struct SolveOptions {
  double step0 = 1.0;       // initial trial step
  double armijo_c = 1e-4;   // sufficient-decrease coefficient, in (0, 1)
  double backtrack = 0.5;   // step shrink factor, in (0, 1)
  double step_growth = 2.0; // per-iteration trial-step regrowth, >= 1
  double grad_tol = 1e-8;
  double fixedpoint_tol = 1e-8;
  int max_iters = 10000;
  int record_every = 1;
  std::uint64_t seed = 0;
  double unbounded_floor = -1e15;
  int max_backtracks = 60;

  void validate() const;
};

enum class Termination { GradTol, FixedPointTol, MaxIters, Unbounded };

const char* to_string(Termination t);

/// Iterate history of one solver run. `values` is the recorded minimizing
/// sequence f(x_n) and is nonincreasing; `residuals` holds ||grad f(x_n)||
/// for unconstrained runs and the projected fixed-point residual for
/// constrained ones, at the same recorded iterations.
struct SolveReport {
  Vector x_star;
  double f_star = 0.0;
  std::vector<int> recorded_iters;
  std::vector<double> values;
  std::vector<double> residuals;
  Termination termination = Termination::MaxIters;
  int iterations = 0;
};

/// Gradient descent with Armijo backtracking. Stops at ||grad f|| <= grad_tol
/// (GradTol), at max_iters, or when f falls below the unbounded floor
/// (Unbounded, the bounded-below hypothesis failing).
SolveReport solve_unconstrained(const Objective& f, const Vector& x0,
                                const SolveOptions& opts = {});

/// Projected gradient descent x <- P_W(x - s grad f(x)) with Armijo on the
/// projected step. The first iterate is P_W(x0); every iterate is feasible.
/// Stops when ||x - P_W(x - step0 grad f(x))|| <= fixedpoint_tol.
SolveReport solve_projected(const Objective& f, const ConvexSet& W,
                            const Vector& x0, const SolveOptions& opts = {});

enum class OptimalityVerdict { FirstOrderStationary, FeasibleFirstOrder, Rejected };

const char* to_string(OptimalityVerdict v);

// certify() thresholds.
inline constexpr double kStationaryGradTol = 1e-6;
inline constexpr double kDirectionalSlack = -1e-8;
inline constexpr double kViResidualTol = 1e-6;

struct OptimalityCertificate {
  double grad_norm = 0.0;
  double min_sampled_directional = 0.0;
  double vi_residual = 0.0;
  OptimalityVerdict verdict = OptimalityVerdict::Rejected;
};

/// First-order optimality certificate at a feasible point: gradient norm,
/// the smallest sampled directional slope <grad f(x), y - x> over feasible
/// y, and the exact projection residual ||x - P_W(x - grad f(x))||.
OptimalityCertificate certify(const Objective& f, const ConvexSet& W,
                              const Vector& x, int n_samples,
                              std::uint64_t seed);

/// Uniqueness pass threshold for multistart agreement.
inline constexpr double kUniquenessTol = 1e-5;

struct MultistartRun {
  Vector start;
  SolveReport report;
  bool ok = false;
  std::string error;
};

struct MultistartReport {
  std::vector<MultistartRun> runs;  // ordered by start index
  double max_pairwise_distance = 0.0;
  bool pass = false;
};

/// Runs solve_projected from n_starts sampled feasible starts and reports
/// the max pairwise distance among the solutions; pass iff <= 1e-5. Only
/// meaningful as a uniqueness check for declared strictly convex objectives.
MultistartReport multistart_uniqueness(const Objective& f, const ConvexSet& W,
                                       int n_starts, const SolveOptions& opts,
                                       std::uint64_t seed);

// --- generic descent cores --------------------------------------------------
//
// The Objective-facing solvers and the Dirichlet energy minimizer share these
// loops; Eval/Grad are callables so large matrix-free problems avoid dense
// assembly.

namespace detail {

inline void record_step(SolveReport& r, int iter, double f, double residual,
                        int record_every) {
  if (record_every < 1) record_every = 1;
  if (iter % record_every == 0) {
    r.recorded_iters.push_back(iter);
    r.values.push_back(f);
    r.residuals.push_back(residual);
  }
}

inline void record_final(SolveReport& r, int iter, double f, double residual) {
  if (!r.recorded_iters.empty() && r.recorded_iters.back() == iter) return;
  r.recorded_iters.push_back(iter);
  r.values.push_back(f);
  r.residuals.push_back(residual);
}

inline void check_finite(double f, const Vector& g, const Vector& x,
                         int iter) {
  if (std::isfinite(f) && g.allFinite()) return;
  throw NumericError("nonfinite value or gradient at iteration " +
                     std::to_string(iter) + " (f = " + std::to_string(f) +
                     ")");
}

}  // namespace detail

template <class EvalFn, class GradFn>
SolveReport minimize_descent(EvalFn&& f, GradFn&& grad, const Vector& x0,
                             const SolveOptions& opts) {
  opts.validate();
  check_vector(x0, "x0");

  SolveReport report;
  Vector x = x0;
  double fx = f(x);
  Vector g = grad(x);
  detail::check_finite(fx, g, x, 0);
  double step = opts.step0;

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const double gnorm = g.norm();
    detail::record_step(report, iter, fx, gnorm, opts.record_every);

    if (gnorm <= opts.grad_tol) {
      report.termination = Termination::GradTol;
      report.iterations = iter;
      detail::record_final(report, iter, fx, gnorm);
      report.x_star = x;
      report.f_star = fx;
      return report;
    }
    if (fx < opts.unbounded_floor) {
      report.termination = Termination::Unbounded;
      report.iterations = iter;
      detail::record_final(report, iter, fx, gnorm);
      report.x_star = x;
      report.f_star = fx;
      return report;
    }

    // Armijo backtracking along -g. The trial step regrows every iteration
    // so a run of rejections near the rounding floor cannot ratchet it to
    // zero.
    const double slope = -gnorm * gnorm;
    double s = step;
    int backtracks = 0;
    bool accepted = false;
    while (backtracks <= opts.max_backtracks) {
      const Vector trial = x - s * g;
      const double f_trial = f(trial);
      if (std::isfinite(f_trial) &&
          f_trial <= fx + opts.armijo_c * s * slope) {
        x = trial;
        fx = f_trial;
        accepted = true;
        break;
      }
      s *= opts.backtrack;
      ++backtracks;
    }
    if (!accepted) break;  // line search exhausted; report MaxIters below

    step = s * opts.step_growth;
    g = grad(x);
    detail::check_finite(fx, g, x, iter + 1);
  }

  report.termination = fx < opts.unbounded_floor ? Termination::Unbounded
                                                 : Termination::MaxIters;
  report.iterations = iter;
  detail::record_final(report, iter, fx, g.norm());
  report.x_star = x;
  report.f_star = fx;
  return report;
}

template <class EvalFn, class GradFn, class ProjectFn>
SolveReport minimize_projected(EvalFn&& f, GradFn&& grad, ProjectFn&& proj,
                               const Vector& x0, const SolveOptions& opts) {
  opts.validate();
  check_vector(x0, "x0");

  SolveReport report;
  Vector x = proj(x0);
  double fx = f(x);
  Vector g = grad(x);
  detail::check_finite(fx, g, x, 0);
  double step = opts.step0;

  auto fixed_point_residual = [&](const Vector& at, const Vector& grad_at) {
    return (at - proj(Vector(at - opts.step0 * grad_at))).norm();
  };

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const double residual = fixed_point_residual(x, g);
    detail::record_step(report, iter, fx, residual, opts.record_every);

    if (residual <= opts.fixedpoint_tol) {
      report.termination = Termination::FixedPointTol;
      report.iterations = iter;
      detail::record_final(report, iter, fx, residual);
      report.x_star = x;
      report.f_star = fx;
      return report;
    }
    if (fx < opts.unbounded_floor) {
      report.termination = Termination::Unbounded;
      report.iterations = iter;
      detail::record_final(report, iter, fx, residual);
      report.x_star = x;
      report.f_star = fx;
      return report;
    }

    // Armijo along the projection arc: accept when the actual projected step
    // gives f(x+) <= f(x) + c <grad, x+ - x>. The trial step regrows every
    // iteration, as in minimize_descent.
    double s = step;
    int backtracks = 0;
    bool accepted = false;
    while (backtracks <= opts.max_backtracks) {
      const Vector trial = proj(Vector(x - s * g));
      const Vector dx = trial - x;
      const double f_trial = f(trial);
      if (std::isfinite(f_trial) &&
          f_trial <= fx + opts.armijo_c * g.dot(dx)) {
        x = trial;
        fx = f_trial;
        accepted = true;
        break;
      }
      s *= opts.backtrack;
      ++backtracks;
    }
    if (!accepted) break;

    step = s * opts.step_growth;
    g = grad(x);
    detail::check_finite(fx, g, x, iter + 1);
  }

  report.termination = fx < opts.unbounded_floor ? Termination::Unbounded
                                                 : Termination::MaxIters;
  report.iterations = iter;
  detail::record_final(report, iter, fx, fixed_point_residual(x, g));
  report.x_star = x;
  report.f_star = fx;
  return report;
}

}  // namespace convexkit
