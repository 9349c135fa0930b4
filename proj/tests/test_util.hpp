#pragma once

#include <initializer_list>
#include <random>

#include <Eigen/Dense>

#include "convexkit/sets.hpp"

namespace convexkit::testutil {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index dim,
                            double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

/// Random symmetric positive definite matrix with eigenvalues drawn
/// uniformly from [lambda_lo, lambda_hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index dim,
                                  double lambda_lo, double lambda_hi) {
  std::uniform_real_distribution<double> lam(lambda_lo, lambda_hi);
  Eigen::MatrixXd raw(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      raw(i, j) = std::normal_distribution<double>(0.0, 1.0)(rng);
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  const Eigen::MatrixXd q = qr.householderQ();
  Vector eigs(dim);
  for (Eigen::Index i = 0; i < dim; ++i) eigs[i] = lam(rng);
  Eigen::MatrixXd a = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());  // exact symmetry
}

/// Brute-force nearest-member search used as the projection oracle.
/// Enumerates an axis-aligned grid of the given pitch over the window that
/// could contain a better point than `claimed` (the box circumscribing the
/// ball around x of radius ||claimed - x||) and keeps members of the set.
/// Hyperplane and simplex shapes are handled in their own parametrizations
/// since an ambient grid almost never hits them.
inline double grid_search_best_distance(const ConvexSet& set, const Vector& x,
                                        const Vector& claimed, double pitch) {
  const Eigen::Index n = x.size();
  const double radius = (claimed - x).norm();
  double best = radius;

  if (const auto* hp = std::get_if<Hyperplane>(&set.shape())) {
    // 1D/2D tangent sweep around the claimed point (n <= 3 supported here).
    const Vector normal = hp->normal / hp->normal.norm();
    std::vector<Vector> tangents;
    for (Eigen::Index i = 0; i < n && tangents.size() + 1 < static_cast<std::size_t>(n);
         ++i) {
      Vector t = Vector::Unit(n, i) -
                 normal * normal.dot(Vector::Unit(n, i));
      for (const Vector& prev : tangents) t -= prev * prev.dot(t);
      if (t.norm() > 1e-8) tangents.push_back(t / t.norm());
    }
    const auto sweep = static_cast<long>(std::ceil(radius / pitch)) + 1;
    if (tangents.size() == 1) {
      for (long a = -sweep; a <= sweep; ++a) {
        const Vector y = claimed + (a * pitch) * tangents[0];
        best = std::min(best, (y - x).norm());
      }
    } else {
      for (long a = -sweep; a <= sweep; ++a) {
        for (long b = -sweep; b <= sweep; ++b) {
          const Vector y =
              claimed + (a * pitch) * tangents[0] + (b * pitch) * tangents[1];
          best = std::min(best, (y - x).norm());
        }
      }
    }
    return best;
  }

  if (std::holds_alternative<Simplex>(set.shape())) {
    // Facet parametrization for dim 3: y = (a, b, 1 - a - b).
    const auto steps = static_cast<long>(std::ceil(1.0 / pitch));
    for (long i = 0; i <= steps; ++i) {
      const double a = std::min(1.0, i * pitch);
      for (long j = 0; i * pitch + j * pitch <= 1.0 && j <= steps; ++j) {
        const double b = j * pitch;
        Vector y(3);
        y << a, b, 1.0 - a - b;
        if (y[2] < 0.0) continue;
        best = std::min(best, (y - x).norm());
      }
    }
    return best;
  }

  // Ambient grid over the window [x - R, x + R]^n filtered by membership.
  const double half = radius + pitch;
  const auto steps = static_cast<long>(std::ceil(2.0 * half / pitch));
  Vector y(n);
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    for (Eigen::Index k = 0; k < n; ++k) {
      y[k] = x[k] - half + idx[static_cast<std::size_t>(k)] * pitch;
    }
    if (contains(set, y, 1e-12)) best = std::min(best, (y - x).norm());
    Eigen::Index carry = 0;
    while (carry < n) {
      if (++idx[static_cast<std::size_t>(carry)] <= steps) break;
      idx[static_cast<std::size_t>(carry)] = 0;
      ++carry;
    }
    if (carry == n) break;
  }
  return best;
}

}  // namespace convexkit::testutil
