#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>

#include "convexkit/space.hpp"

namespace convexkit {

struct Box {
  Vector lo, hi;  // lo_i <= hi_i componentwise
};

struct Ball {
  Vector center;
  double radius;  // > 0, standard inner product
};

/// { x : <normal, x> <= offset }
struct Halfspace {
  Vector normal;  // nonzero
  double offset;
};

/// { x : <normal, x> = offset }
struct Hyperplane {
  Vector normal;  // nonzero
  double offset;
};

/// { x : x_i >= 0, sum x_i = 1 }
struct Simplex {
  Eigen::Index dim;
};

struct WholeSpace {
  Eigen::Index dim;
};

using SetShape = std::variant<Box, Ball, Halfspace, Hyperplane, Simplex, WholeSpace>;

/// Convex feasible set with membership, exact projection and a sampler.
class ConvexSet {
 public:
  ConvexSet(SetShape shape);  // NOLINT: implicit by design

  const SetShape& shape() const { return shape_; }
  Eigen::Index dim() const;
  const char* shape_name() const;

 private:
  SetShape shape_;
};

/// True iff x satisfies the shape's defining constraints within additive
/// slack tol.
bool contains(const ConvexSet& set, const Vector& x, double tol);

/// Unique nearest point of the set in the standard norm. Members map to
/// themselves.
Vector project(const ConvexSet& set, const Vector& x);

/// Draws one point from the set (shape-specific sampler).
Vector sample(const ConvexSet& set, std::mt19937_64& rng);

/// A valid certificate has max_vi_violation <= kViTolerance.
inline constexpr double kViTolerance = 1e-10;

struct ProjectionCertificate {
  Vector point;
  Vector projection;
  double max_vi_violation = 0.0;
  int samples_used = 0;

  bool valid() const { return max_vi_violation <= kViTolerance; }
};

/// Samples n_samples feasible points y and records the largest value of
/// <x - P(x), y - P(x)>, which is <= 0 for the exact projection.
ProjectionCertificate vi_certificate(const ConvexSet& set, const Vector& x,
                                     int n_samples, std::uint64_t seed);

/// Same sweep against an arbitrary candidate projection point. Lets a test
/// harness inject a faulty projection and measure the resulting violation.
ProjectionCertificate vi_certificate_at(const ConvexSet& set, const Vector& x,
                                        const Vector& candidate, int n_samples,
                                        std::uint64_t seed);

struct SegmentCounterexample {
  Vector x, y;
  double beta;
};

/// Core of the convexity segment check, generic over the sampler and the
/// membership test so hand-built (non-convex) shapes can run through it.
template <class SampleFn, class MemberFn>
std::optional<SegmentCounterexample> segment_check_with(SampleFn&& draw,
                                                        MemberFn&& member,
                                                        int n_trials,
                                                        std::uint64_t seed,
                                                        double tol = 1e-10) {
  if (n_trials < 1) throw PreconditionError("segment_check: n_trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < n_trials; ++t) {
    const Vector x = draw(rng);
    const Vector y = draw(rng);
    const double beta = unit(rng);
    const Vector mix = beta * x + (1.0 - beta) * y;
    if (!member(mix, tol)) return SegmentCounterexample{x, y, beta};
  }
  return std::nullopt;
}

/// Samples segment endpoints from the set and returns the first convex
/// combination that fails membership (tol 1e-10), or nullopt.
std::optional<SegmentCounterexample> segment_check(const ConvexSet& set,
                                                   int n_trials,
                                                   std::uint64_t seed);

}  // namespace convexkit
