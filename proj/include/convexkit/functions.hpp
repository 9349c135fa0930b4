#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "convexkit/sets.hpp"

namespace convexkit {

/// f(x) = 1/2 <x, A x> - <b, x>
struct Quadratic {
  Eigen::MatrixXd A;  // symmetric
  Vector b;
};

/// f(x) = sum_i (cosh(x_i) - 1)
struct CoshSum {
  Eigen::Index dim;
};

/// f(x) = <c, x>
struct Linear {
  Vector c;
};

/// f(x) = 1/2 ||x - center||^2
struct NormSquared {
  Vector center;
};

using ObjectiveForm = std::variant<Quadratic, CoshSum, Linear, NormSquared>;

enum class ConvexityClass { Convex, StrictlyConvex, NonconvexUnknown };

const char* to_string(ConvexityClass c);

/// Power-iteration spectral bounds for a symmetric matrix (200 iterations on
/// A and on the shifted matrix lambda_max_abs*I - A).
struct EigenEstimate {
  double lambda_max_abs = 0.0;
  double lambda_min = 0.0;
  Vector min_vector;  // unit eigenvector estimate for lambda_min
};

EigenEstimate estimate_eigen_bounds(const Eigen::MatrixXd& A);

/// Evaluable objective functional with analytic gradient and convexity-class
/// metadata. Construction validates the declared class against the form
/// (Quadratic declared StrictlyConvex requires a positive smallest-eigenvalue
/// estimate).
class Objective {
 public:
  Objective(ObjectiveForm form, ConvexityClass declared);

  static Objective quadratic(Eigen::MatrixXd A, Vector b,
                             ConvexityClass declared = ConvexityClass::Convex);
  static Objective cosh_sum(Eigen::Index dim);
  static Objective linear(Vector c);
  static Objective norm_squared(Vector center);

  const ObjectiveForm& form() const { return form_; }
  ConvexityClass declared_class() const { return declared_; }
  Eigen::Index dim() const;
  const char* form_name() const;

 private:
  ObjectiveForm form_;
  ConvexityClass declared_;
};

double eval(const Objective& f, const Vector& x);
Vector gradient(const Objective& f, const Vector& x);

enum class DerivativeMode { Analytic, OneSidedLimit };

struct DirectionalDerivative {
  double value = 0.0;
  /// OneSidedLimit only: false when the last difference quotients spread by
  /// more than 1e-4 relative.
  bool converged = true;
};

/// One-sided directional derivative. Analytic mode returns <grad f(x), d>;
/// OneSidedLimit runs the quotients (f(x + t d) - f(x))/t over t = 10^-1..-8
/// and Richardson-extrapolates.
DirectionalDerivative directional_derivative(const Objective& f,
                                             const Vector& x, const Vector& d,
                                             DerivativeMode mode);

/// beta f(x) + (1-beta) f(y) - f(beta x + (1-beta) y); >= 0 for convex f.
double jensen_slack(const Objective& f, const Vector& x, const Vector& y,
                    double beta);

struct ConvexityWitness {
  Vector x, y;
  double beta = 0.0;
  double violation = 0.0;
};

struct ConvexityReport {
  double max_violation = 0.0;
  std::optional<ConvexityWitness> witness;  // the maximizing triple
};

struct StrictnessResult {
  bool passed = false;
  double modulus = 0.0;  // per-form kappa used in the slack bound
  std::optional<ConvexityWitness> witness;
};

enum class CoercivityVerdict { Coercive, NotCoercive, Inconclusive };

const char* to_string(CoercivityVerdict v);

struct CoercivityReport {
  CoercivityVerdict verdict = CoercivityVerdict::Inconclusive;
  std::optional<Vector> witness_direction;
  std::string note;
};

// --- generic cores (usable with harness-injected callables) ---------------

template <class F>
ConvexityReport jensen_check_fn(F&& f, const ConvexSet& domain, int n_trials,
                                std::uint64_t seed) {
  if (n_trials < 1) throw PreconditionError("jensen_check: n_trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < n_trials; ++t) {
    const Vector x = sample(domain, rng);
    const Vector y = sample(domain, rng);
    const double beta = unit(rng);
    const Vector mix = beta * x + (1.0 - beta) * y;
    const double violation = f(mix) - beta * f(x) - (1.0 - beta) * f(y);
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.witness = ConvexityWitness{x, y, beta, violation};
    }
  }
  return report;
}

template <class F>
ConvexityReport epigraph_check_fn(F&& f, const ConvexSet& domain, int n_trials,
                                  std::uint64_t seed) {
  if (n_trials < 1) throw PreconditionError("epigraph_check: n_trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < n_trials; ++t) {
    // Epigraph points (x, f(x) + s) with s in [0, 1].
    const Vector x = sample(domain, rng);
    const Vector y = sample(domain, rng);
    const double rx = f(x) + unit(rng);
    const double ry = f(y) + unit(rng);
    const double beta = unit(rng);
    const Vector x_mix = beta * x + (1.0 - beta) * y;
    const double r_mix = beta * rx + (1.0 - beta) * ry;
    const double violation = f(x_mix) - r_mix;
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.witness = ConvexityWitness{x, y, beta, violation};
    }
  }
  return report;
}

template <class F>
CoercivityReport coercivity_probe_fn(F&& f, Eigen::Index dim, int n_directions,
                                     const std::vector<double>& radii,
                                     double growth_floor, std::uint64_t seed) {
  if (n_directions < 1)
    throw PreconditionError("coercivity_probe: n_directions >= 1");
  if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()) ||
      std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
    throw PreconditionError(
        "coercivity_probe: radii must be strictly increasing with >= 3 values");
  }

  // Signed coordinate axes first, then seeded random unit directions.
  std::vector<Vector> directions;
  directions.reserve(2 * static_cast<std::size_t>(dim) + n_directions);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e[i] = 1.0;
    directions.push_back(e);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e[i] = -1.0;
    directions.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < n_directions; ++k) {
    Vector d(dim);
    do {
      for (Eigen::Index i = 0; i < dim; ++i) d[i] = gauss(rng);
    } while (d.norm() == 0.0);
    directions.push_back(d / d.norm());
  }

  CoercivityReport report;
  bool all_grow = true;
  try {
    for (const Vector& d : directions) {
      std::vector<double> values;
      values.reserve(radii.size());
      for (double r : radii) values.push_back(f(Vector(r * d)));
      const std::size_t m = values.size();
      if (values[m - 1] <= values[m - 2]) {
        report.verdict = CoercivityVerdict::NotCoercive;
        report.witness_direction = d;
        return report;
      }
      for (std::size_t i = 0; i + 1 < m; ++i) {
        if (values[i + 1] - values[i] < growth_floor) all_grow = false;
      }
    }
  } catch (const RangeError& e) {
    report.verdict = CoercivityVerdict::Inconclusive;
    report.note = std::string("evaluation out of range: ") + e.what();
    return report;
  }
  report.verdict =
      all_grow ? CoercivityVerdict::Coercive : CoercivityVerdict::Inconclusive;
  return report;
}

// --- objective-facing operations -------------------------------------------

/// Max over sampled (x, y, beta) of f(mix) - beta f(x) - (1-beta) f(y).
ConvexityReport jensen_check(const Objective& f, const ConvexSet& domain,
                             int n_trials, std::uint64_t seed);

/// Convex combinations of sampled epigraph points; max of f(x_mix) - r_mix.
ConvexityReport epigraph_check(const Objective& f, const ConvexSet& domain,
                               int n_trials, std::uint64_t seed);

/// Samples distinct pairs (||x-y|| >= 1e-3) and beta in [0.25, 0.75] and
/// requires Jensen slack >= margin * beta(1-beta) ||x-y||^2 * kappa with the
/// per-form modulus kappa. Linear always fails.
StrictnessResult strictness_check(const Objective& f, const ConvexSet& domain,
                                  int n_trials, double margin,
                                  std::uint64_t seed);

/// Evaluates f(r d) over the radii along the signed axes plus n_directions
/// sampled unit directions. NotCoercive on any final non-increase; Coercive
/// when every consecutive growth is at least growth_floor.
CoercivityReport coercivity_probe(const Objective& f, int n_directions,
                                  const std::vector<double>& radii,
                                  double growth_floor, std::uint64_t seed);

inline std::vector<double> default_coercivity_radii() {
  return {10.0, 100.0, 1000.0};
}

}  // namespace convexkit
