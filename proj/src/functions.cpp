#include "convexkit/functions.hpp"

#include <cmath>

namespace convexkit {

const char* to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::Convex: return "convex";
    case ConvexityClass::StrictlyConvex: return "strictly_convex";
    case ConvexityClass::NonconvexUnknown: return "nonconvex_unknown";
  }
  return "?";
}

const char* to_string(CoercivityVerdict v) {
  switch (v) {
    case CoercivityVerdict::Coercive: return "coercive";
    case CoercivityVerdict::NotCoercive: return "not_coercive";
    case CoercivityVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

EigenEstimate estimate_eigen_bounds(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DimensionError("estimate_eigen_bounds: square matrix required");
  }
  const Eigen::Index n = A.rows();
  constexpr int kIters = 200;

  // Deterministic pseudo-random start; power iteration needs a component
  // along the dominant eigenvector.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&]() {
    Vector v(n);
    double vn = 0.0;
    do {
      for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
      vn = v.norm();
    } while (vn == 0.0);
    return Vector(v / vn);
  };

  auto dominant = [&](auto&& apply) {
    Vector v = random_unit();
    double lambda = 0.0;
    for (int k = 0; k < kIters; ++k) {
      Vector w = apply(v);
      const double wn = w.norm();
      if (wn == 0.0) return std::pair<double, Vector>(0.0, v);
      v = w / wn;
      lambda = v.dot(apply(v));
    }
    return std::pair<double, Vector>(lambda, v);
  };

  EigenEstimate est;
  auto [mu, mu_vec] = dominant([&](const Vector& v) { return Vector(A * v); });
  est.lambda_max_abs = std::abs(mu);

  const double shift = est.lambda_max_abs;
  auto [nu, nu_vec] = dominant(
      [&](const Vector& v) { return Vector(shift * v - A * v); });
  est.lambda_min = shift - nu;
  est.min_vector = nu_vec;
  return est;
}

namespace {

void validate_form(const ObjectiveForm& form, ConvexityClass declared) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          if (f.A.rows() != f.A.cols()) {
            throw DimensionError("Quadratic: A must be square");
          }
          require_same_dim(f.A.rows(), f.b.size(), "Quadratic");
          check_vector(f.b, "Quadratic.b");
          if (!f.A.allFinite()) {
            throw NumericError("Quadratic: A entries must be finite");
          }
          const double scale = std::max(1.0, f.A.cwiseAbs().maxCoeff());
          if ((f.A - f.A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw PreconditionError("Quadratic: A must be symmetric");
          }
          if (declared == ConvexityClass::StrictlyConvex &&
              estimate_eigen_bounds(f.A).lambda_min <= 0.0) {
            throw PreconditionError(
                "Quadratic declared StrictlyConvex but the smallest "
                "eigenvalue estimate is not positive");
          }
        } else if constexpr (std::is_same_v<T, CoshSum>) {
          if (f.dim < 1) throw DimensionError("CoshSum: dim must be >= 1");
          if (declared != ConvexityClass::StrictlyConvex) {
            throw PreconditionError("CoshSum is strictly convex");
          }
        } else if constexpr (std::is_same_v<T, Linear>) {
          check_vector(f.c, "Linear.c");
          if (declared != ConvexityClass::Convex) {
            throw PreconditionError(
                "Linear is convex but not strictly convex");
          }
        } else {
          check_vector(f.center, "NormSquared.center");
          if (declared != ConvexityClass::StrictlyConvex) {
            throw PreconditionError("NormSquared is strictly convex");
          }
        }
      },
      form);
}

}  // namespace

Objective::Objective(ObjectiveForm form, ConvexityClass declared)
    : form_(std::move(form)), declared_(declared) {
  validate_form(form_, declared_);
}

Objective Objective::quadratic(Eigen::MatrixXd A, Vector b,
                               ConvexityClass declared) {
  return Objective(Quadratic{std::move(A), std::move(b)}, declared);
}

Objective Objective::cosh_sum(Eigen::Index dim) {
  return Objective(CoshSum{dim}, ConvexityClass::StrictlyConvex);
}

Objective Objective::linear(Vector c) {
  return Objective(Linear{std::move(c)}, ConvexityClass::Convex);
}

Objective Objective::norm_squared(Vector center) {
  return Objective(NormSquared{std::move(center)},
                   ConvexityClass::StrictlyConvex);
}

Eigen::Index Objective::dim() const {
  return std::visit(
      [](const auto& f) -> Eigen::Index {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Quadratic>) return f.b.size();
        else if constexpr (std::is_same_v<T, CoshSum>) return f.dim;
        else if constexpr (std::is_same_v<T, Linear>) return f.c.size();
        else return f.center.size();
      },
      form_);
}

const char* Objective::form_name() const {
  return std::visit(
      [](const auto& f) -> const char* {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Quadratic>) return "quadratic";
        else if constexpr (std::is_same_v<T, CoshSum>) return "cosh_sum";
        else if constexpr (std::is_same_v<T, Linear>) return "linear";
        else return "norm_squared";
      },
      form_);
}

// cosh(x) overflows past ~710; the documented contract rejects |x| > 700.
inline constexpr double kCoshRange = 700.0;

double eval(const Objective& f, const Vector& x) {
  check_vector(x, "x");
  require_same_dim(x.size(), f.dim(), "eval");
  return std::visit(
      [&](const auto& form) -> double {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return 0.5 * x.dot(form.A * x) - form.b.dot(x);
        } else if constexpr (std::is_same_v<T, CoshSum>) {
          if ((x.cwiseAbs().array() > kCoshRange).any()) {
            throw RangeError("cosh_sum: |x_i| > 700 overflows");
          }
          double total = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            total += std::cosh(x[i]) - 1.0;
          }
          return total;
        } else if constexpr (std::is_same_v<T, Linear>) {
          return form.c.dot(x);
        } else {
          return 0.5 * (x - form.center).squaredNorm();
        }
      },
      f.form());
}

Vector gradient(const Objective& f, const Vector& x) {
  check_vector(x, "x");
  require_same_dim(x.size(), f.dim(), "gradient");
  return std::visit(
      [&](const auto& form) -> Vector {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return form.A * x - form.b;
        } else if constexpr (std::is_same_v<T, CoshSum>) {
          if ((x.cwiseAbs().array() > kCoshRange).any()) {
            throw RangeError("cosh_sum: |x_i| > 700 overflows");
          }
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = std::sinh(x[i]);
          return g;
        } else if constexpr (std::is_same_v<T, Linear>) {
          return form.c;
        } else {
          return x - form.center;
        }
      },
      f.form());
}

DirectionalDerivative directional_derivative(const Objective& f,
                                             const Vector& x, const Vector& d,
                                             DerivativeMode mode) {
  check_vector(x, "x");
  check_vector(d, "d");
  require_same_dim(x.size(), d.size(), "directional_derivative");
  require_same_dim(x.size(), f.dim(), "directional_derivative");
  if (d.norm() == 0.0) {
    throw PreconditionError("directional_derivative: d must be nonzero");
  }

  if (mode == DerivativeMode::Analytic) {
    return {gradient(f, x).dot(d), true};
  }

  // Fixed geometric sequence t = 10^-1 .. 10^-8; Richardson extrapolation of
  // consecutive pairs removes the O(t) term of the one-sided quotient.
  constexpr int kSteps = 8;
  const double f0 = eval(f, x);
  double quotients[kSteps];
  double t = 0.1;
  for (int k = 0; k < kSteps; ++k, t *= 0.1) {
    quotients[k] = (eval(f, Vector(x + t * d)) - f0) / t;
  }
  double extrapolated[kSteps - 1];
  for (int k = 0; k + 1 < kSteps; ++k) {
    extrapolated[k] = (10.0 * quotients[k + 1] - quotients[k]) / 9.0;
  }

  // Median of the last three extrapolated values damps roundoff at the
  // smallest t.
  double last3[3] = {extrapolated[kSteps - 4], extrapolated[kSteps - 3],
                     extrapolated[kSteps - 2]};
  std::sort(std::begin(last3), std::end(last3));
  const double value = last3[1];

  const double q_lo =
      std::min({quotients[kSteps - 3], quotients[kSteps - 2],
                quotients[kSteps - 1]});
  const double q_hi =
      std::max({quotients[kSteps - 3], quotients[kSteps - 2],
                quotients[kSteps - 1]});
  const bool converged =
      (q_hi - q_lo) <= 1e-4 * std::max(1.0, std::abs(value));
  return {value, converged};
}

double jensen_slack(const Objective& f, const Vector& x, const Vector& y,
                    double beta) {
  const Vector mix = beta * x + (1.0 - beta) * y;
  return beta * eval(f, x) + (1.0 - beta) * eval(f, y) - eval(f, mix);
}

ConvexityReport jensen_check(const Objective& f, const ConvexSet& domain,
                             int n_trials, std::uint64_t seed) {
  require_same_dim(f.dim(), domain.dim(), "jensen_check");
  return jensen_check_fn([&](const Vector& z) { return eval(f, z); }, domain,
                         n_trials, seed);
}

ConvexityReport epigraph_check(const Objective& f, const ConvexSet& domain,
                               int n_trials, std::uint64_t seed) {
  require_same_dim(f.dim(), domain.dim(), "epigraph_check");
  return epigraph_check_fn([&](const Vector& z) { return eval(f, z); }, domain,
                           n_trials, seed);
}

namespace {

// Strong-convexity modulus entering the strictness slack bound.
double strictness_modulus(const Objective& f, Vector* null_direction) {
  return std::visit(
      [&](const auto& form) -> double {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          EigenEstimate est = estimate_eigen_bounds(form.A);
          if (null_direction) *null_direction = est.min_vector;
          return est.lambda_min;
        } else if constexpr (std::is_same_v<T, CoshSum>) {
          return 1.0;  // cosh'' = cosh >= 1 on the probed range
        } else if constexpr (std::is_same_v<T, Linear>) {
          return 0.0;
        } else {
          return 1.0;
        }
      },
      f.form());
}

}  // namespace

StrictnessResult strictness_check(const Objective& f, const ConvexSet& domain,
                                  int n_trials, double margin,
                                  std::uint64_t seed) {
  if (!(margin > 0.0)) {
    throw PreconditionError("strictness_check: margin must be > 0");
  }
  if (n_trials < 1) throw PreconditionError("strictness_check: n_trials >= 1");
  require_same_dim(f.dim(), domain.dim(), "strictness_check");

  StrictnessResult result;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> beta_draw(0.25, 0.75);

  if (std::holds_alternative<Linear>(f.form())) {
    // Affine functions meet Jensen with equality; any distinct pair is a
    // counterexample.
    const Vector x = sample(domain, rng);
    Vector y = sample(domain, rng);
    const double beta = beta_draw(rng);
    result.passed = false;
    result.modulus = 0.0;
    result.witness =
        ConvexityWitness{x, y, beta, jensen_slack(f, x, y, beta)};
    return result;
  }

  Vector null_direction;
  const double kappa = strictness_modulus(f, &null_direction);
  result.modulus = kappa;
  if (kappa <= 1e-12) {
    // Degenerate curvature: exhibit the (near-)null direction directly.
    const Vector x = sample(domain, rng);
    const Vector y = x + null_direction;
    result.passed = false;
    result.witness =
        ConvexityWitness{x, y, 0.5, jensen_slack(f, x, y, 0.5)};
    return result;
  }

  for (int t = 0; t < n_trials; ++t) {
    Vector x = sample(domain, rng);
    Vector y = sample(domain, rng);
    int retries = 0;
    while ((x - y).norm() < 1e-3) {
      if (++retries > 100) {
        throw PreconditionError(
            "strictness_check: domain too small to sample distinct points");
      }
      y = sample(domain, rng);
    }
    const double beta = beta_draw(rng);
    const double slack = jensen_slack(f, x, y, beta);
    const double required =
        margin * beta * (1.0 - beta) * (x - y).squaredNorm() * kappa;
    // Small relative allowance keeps the exact-equality case (margin at the
    // theoretical modulus) from failing on rounding.
    if (slack < required - 1e-9 * std::max(1.0, std::abs(required))) {
      result.passed = false;
      result.witness = ConvexityWitness{x, y, beta, slack};
      return result;
    }
  }
  result.passed = true;
  return result;
}

CoercivityReport coercivity_probe(const Objective& f, int n_directions,
                                  const std::vector<double>& radii,
                                  double growth_floor, std::uint64_t seed) {
  return coercivity_probe_fn([&](const Vector& z) { return eval(f, z); },
                             f.dim(), n_directions, radii, growth_floor, seed);
}

}  // namespace convexkit
