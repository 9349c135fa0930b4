#include "convexkit/minimize.hpp"

namespace convexkit {

void SolveOptions::validate() const {
  if (!(step0 > 0.0)) throw PreconditionError("SolveOptions: step0 > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw PreconditionError("SolveOptions: armijo_c in (0, 1)");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw PreconditionError("SolveOptions: backtrack in (0, 1)");
  }
  if (!(step_growth >= 1.0)) {
    throw PreconditionError("SolveOptions: step_growth >= 1");
  }
  if (!(grad_tol > 0.0) || !(fixedpoint_tol > 0.0)) {
    throw PreconditionError("SolveOptions: tolerances > 0");
  }
  if (max_iters < 1) throw PreconditionError("SolveOptions: max_iters >= 1");
  if (max_backtracks < 1) {
    throw PreconditionError("SolveOptions: max_backtracks >= 1");
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GradTol: return "grad_tol";
    case Termination::FixedPointTol: return "fixed_point_tol";
    case Termination::MaxIters: return "max_iters";
    case Termination::Unbounded: return "unbounded";
  }
  return "?";
}

const char* to_string(OptimalityVerdict v) {
  switch (v) {
    case OptimalityVerdict::FirstOrderStationary: return "first_order_stationary";
    case OptimalityVerdict::FeasibleFirstOrder: return "feasible_first_order";
    case OptimalityVerdict::Rejected: return "rejected";
  }
  return "?";
}

SolveReport solve_unconstrained(const Objective& f, const Vector& x0,
                                const SolveOptions& opts) {
  require_same_dim(x0.size(), f.dim(), "solve_unconstrained");
  return minimize_descent([&](const Vector& x) { return eval(f, x); },
                          [&](const Vector& x) { return gradient(f, x); }, x0,
                          opts);
}

SolveReport solve_projected(const Objective& f, const ConvexSet& W,
                            const Vector& x0, const SolveOptions& opts) {
  require_same_dim(x0.size(), f.dim(), "solve_projected");
  require_same_dim(x0.size(), W.dim(), "solve_projected");
  return minimize_projected([&](const Vector& x) { return eval(f, x); },
                            [&](const Vector& x) { return gradient(f, x); },
                            [&](const Vector& x) { return project(W, x); },
                            x0, opts);
}

OptimalityCertificate certify(const Objective& f, const ConvexSet& W,
                              const Vector& x, int n_samples,
                              std::uint64_t seed) {
  if (n_samples < 1) throw PreconditionError("certify: n_samples >= 1");
  require_same_dim(x.size(), f.dim(), "certify");
  require_same_dim(x.size(), W.dim(), "certify");
  if (!contains(W, x, 1e-10)) {
    throw PreconditionError("certify: x must be feasible within 1e-10");
  }

  const Vector g = gradient(f, x);

  OptimalityCertificate cert;
  cert.grad_norm = g.norm();
  cert.vi_residual = (x - project(W, Vector(x - g))).norm();

  std::mt19937_64 rng(seed);
  double min_slope = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const Vector y = sample(W, rng);
    min_slope = std::min(min_slope, g.dot(y - x));
  }
  cert.min_sampled_directional = min_slope;

  if (cert.grad_norm <= kStationaryGradTol) {
    cert.verdict = OptimalityVerdict::FirstOrderStationary;
  } else if (cert.min_sampled_directional >= kDirectionalSlack &&
             cert.vi_residual <= kViResidualTol) {
    cert.verdict = OptimalityVerdict::FeasibleFirstOrder;
  } else {
    cert.verdict = OptimalityVerdict::Rejected;
  }
  return cert;
}

MultistartReport multistart_uniqueness(const Objective& f, const ConvexSet& W,
                                       int n_starts, const SolveOptions& opts,
                                       std::uint64_t seed) {
  if (n_starts < 2) {
    throw PreconditionError("multistart_uniqueness: n_starts >= 2");
  }
  require_same_dim(f.dim(), W.dim(), "multistart_uniqueness");

  std::mt19937_64 rng(seed);
  MultistartReport report;
  report.runs.reserve(static_cast<std::size_t>(n_starts));
  for (int k = 0; k < n_starts; ++k) {
    MultistartRun run;
    run.start = sample(W, rng);
    try {
      run.report = solve_projected(f, W, run.start, opts);
      run.ok = true;
    } catch (const std::exception& e) {
      run.ok = false;
      run.error = e.what();
    }
    report.runs.push_back(std::move(run));
  }

  double worst = 0.0;
  bool any_pair = false;
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    if (!report.runs[i].ok) continue;
    for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
      if (!report.runs[j].ok) continue;
      any_pair = true;
      worst = std::max(
          worst,
          (report.runs[i].report.x_star - report.runs[j].report.x_star).norm());
    }
  }
  report.max_pairwise_distance = worst;
  report.pass = any_pair && worst <= kUniquenessTol;
  return report;
}

}  // namespace convexkit
