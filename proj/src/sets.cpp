#include "convexkit/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace convexkit {

namespace {

void validate_shape(const SetShape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          check_vector(s.lo, "Box.lo");
          check_vector(s.hi, "Box.hi");
          require_same_dim(s.lo.size(), s.hi.size(), "Box");
          if ((s.lo.array() > s.hi.array()).any()) {
            throw PreconditionError("Box: lo must be <= hi componentwise");
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          check_vector(s.center, "Ball.center");
          if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
            throw PreconditionError("Ball: radius must be positive");
          }
        } else if constexpr (std::is_same_v<T, Halfspace> ||
                             std::is_same_v<T, Hyperplane>) {
          check_vector(s.normal, "normal");
          if (!std::isfinite(s.offset)) {
            throw PreconditionError("offset must be finite");
          }
          if (s.normal.norm() == 0.0) {
            throw PreconditionError("normal must be nonzero");
          }
        } else {
          if (s.dim < 1) throw PreconditionError("dim must be >= 1");
        }
      },
      shape);
}

}  // namespace

ConvexSet::ConvexSet(SetShape shape) : shape_(std::move(shape)) {
  validate_shape(shape_);
}

Eigen::Index ConvexSet::dim() const {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) return s.lo.size();
        else if constexpr (std::is_same_v<T, Ball>) return s.center.size();
        else if constexpr (std::is_same_v<T, Halfspace>) return s.normal.size();
        else if constexpr (std::is_same_v<T, Hyperplane>) return s.normal.size();
        else return s.dim;
      },
      shape_);
}

const char* ConvexSet::shape_name() const {
  return std::visit(
      [](const auto& s) -> const char* {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) return "box";
        else if constexpr (std::is_same_v<T, Ball>) return "ball";
        else if constexpr (std::is_same_v<T, Halfspace>) return "halfspace";
        else if constexpr (std::is_same_v<T, Hyperplane>) return "hyperplane";
        else if constexpr (std::is_same_v<T, Simplex>) return "simplex";
        else return "whole_space";
      },
      shape_);
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  check_vector(x, "x");
  require_same_dim(x.size(), set.dim(), "contains");
  if (tol < 0.0) throw PreconditionError("contains: tol must be >= 0");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return (x.array() >= s.lo.array() - tol).all() &&
                 (x.array() <= s.hi.array() + tol).all();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - s.center).norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return s.normal.dot(x) <= s.offset + tol;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return std::abs(s.normal.dot(x) - s.offset) <= tol;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
        } else {
          return true;
        }
      },
      set.shape());
}

namespace {

// Sort-and-threshold simplex projection. Ties in sorted coordinates are
// broken by original index order (stable sort).
Vector project_simplex(const Vector& x) {
  // Members must map to themselves exactly; the sorted cumulative sum below
  // would re-round them by an ulp.
  if ((x.array() >= 0.0).all() && x.sum() == 1.0) return x;

  const Eigen::Index n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return x[a] > x[b]; });

  double cumulative = 0.0;
  double tau = 0.0;
  Eigen::Index rho = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double value = x[order[static_cast<std::size_t>(j)]];
    cumulative += value;
    const double candidate = (1.0 - cumulative) / static_cast<double>(j + 1);
    if (value + candidate > 0.0) {
      rho = j + 1;
      tau = candidate;
    }
  }
  (void)rho;
  return (x.array() + tau).cwiseMax(0.0);
}

}  // namespace

Vector project(const ConvexSet& set, const Vector& x) {
  check_vector(x, "x");
  require_same_dim(x.size(), set.dim(), "project");
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return x.cwiseMax(s.lo).cwiseMin(s.hi);
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector gap = x - s.center;
          const double dist = gap.norm();
          if (dist <= s.radius) return x;
          return s.center + (s.radius / dist) * gap;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          const double violation = s.normal.dot(x) - s.offset;
          if (violation <= 0.0) return x;
          return x - (violation / s.normal.squaredNorm()) * s.normal;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double gap = s.normal.dot(x) - s.offset;
          return x - (gap / s.normal.squaredNorm()) * s.normal;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return project_simplex(x);
        } else {
          return x;
        }
      },
      set.shape());
}

Vector sample(const ConvexSet& set, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index n = set.dim();
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          Vector y(n);
          for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = s.lo[i] + unit(rng) * (s.hi[i] - s.lo[i]);
          }
          return y;
        } else if constexpr (std::is_same_v<T, Ball>) {
          // Gaussian direction, radius proportional to U^(1/n): near-uniform
          // over the ball.
          Vector d(n);
          double dn = 0.0;
          do {
            for (Eigen::Index i = 0; i < n; ++i) d[i] = gauss(rng);
            dn = d.norm();
          } while (dn == 0.0);
          const double r =
              s.radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
          return s.center + (r / dn) * d;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          // Box sample around the boundary foot point, reflected inside when
          // it lands on the infeasible side.
          const double nn = s.normal.squaredNorm();
          const Vector foot = (s.offset / nn) * s.normal;
          const double half = 5.0;
          Vector y(n);
          for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = foot[i] + half * (2.0 * unit(rng) - 1.0);
          }
          const double violation = s.normal.dot(y) - s.offset;
          if (violation > 0.0) y -= (2.0 * violation / nn) * s.normal;
          return y;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double nn = s.normal.squaredNorm();
          const Vector foot = (s.offset / nn) * s.normal;
          Vector y(n);
          for (Eigen::Index i = 0; i < n; ++i) y[i] = foot[i] + gauss(rng);
          const double gap = s.normal.dot(y) - s.offset;
          return y - (gap / nn) * s.normal;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          // Exponential spacings normalized to the unit sum.
          Vector y(n);
          double total = 0.0;
          for (Eigen::Index i = 0; i < n; ++i) {
            double u;
            do {
              u = unit(rng);
            } while (u <= 0.0);
            y[i] = -std::log(u);
            total += y[i];
          }
          return y / total;
        } else {
          Vector y(n);
          for (Eigen::Index i = 0; i < n; ++i) y[i] = gauss(rng);
          return y;
        }
      },
      set.shape());
}

ProjectionCertificate vi_certificate_at(const ConvexSet& set, const Vector& x,
                                        const Vector& candidate, int n_samples,
                                        std::uint64_t seed) {
  if (n_samples < 1) throw PreconditionError("vi_certificate: n_samples >= 1");
  check_vector(x, "x");
  require_same_dim(x.size(), set.dim(), "vi_certificate");
  require_same_dim(candidate.size(), set.dim(), "vi_certificate candidate");

  const Vector residual = x - candidate;
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const Vector y = sample(set, rng);
    worst = std::max(worst, residual.dot(y - candidate));
  }

  ProjectionCertificate cert;
  cert.point = x;
  cert.projection = candidate;
  cert.max_vi_violation = worst;
  cert.samples_used = n_samples;
  return cert;
}

ProjectionCertificate vi_certificate(const ConvexSet& set, const Vector& x,
                                     int n_samples, std::uint64_t seed) {
  return vi_certificate_at(set, x, project(set, x), n_samples, seed);
}

std::optional<SegmentCounterexample> segment_check(const ConvexSet& set,
                                                   int n_trials,
                                                   std::uint64_t seed) {
  return segment_check_with(
      [&](std::mt19937_64& rng) { return sample(set, rng); },
      [&](const Vector& z, double tol) { return contains(set, z, tol); },
      n_trials, seed);
}

}  // namespace convexkit
