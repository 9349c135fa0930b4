#pragma once

#include <Eigen/Core>
#include <optional>
#include <variant>
#include <vector>

#include "convexkit/errors.hpp"
#include "convexkit/grid.hpp"

namespace convexkit {

/// Coordinate vector standing in for an element of a real separable Hilbert
/// space. All entries must be finite and the dimension at least 1.
using Vector = Eigen::VectorXd;

/// Throws DimensionError / NumericError unless v is nonempty and all-finite.
void check_vector(const Vector& v, const char* what = "vector");

struct StandardForm {};

struct DiagonalWeightedForm {
  Vector weights;  // all strictly positive
};

struct LaplacianEnergyForm {
  Grid grid;  // <u, v> = <u, L v> on the zero-boundary grid space
};

/// Descriptor of the bilinear form in use. The standard form accepts any
/// dimension; the weighted and Laplacian-energy forms fix one.
class InnerProduct {
 public:
  InnerProduct() : form_(StandardForm{}) {}

  static InnerProduct standard() { return InnerProduct(); }
  static InnerProduct diagonal_weighted(Vector weights);
  static InnerProduct laplacian_energy(Grid grid);

  const std::variant<StandardForm, DiagonalWeightedForm, LaplacianEnergyForm>&
  form() const {
    return form_;
  }

  /// Dimension the form expects, or nullopt when any dimension works.
  std::optional<Eigen::Index> expected_dim() const;

 private:
  std::variant<StandardForm, DiagonalWeightedForm, LaplacianEnergyForm> form_;
};

/// Bilinear form value; symmetric in u and v.
double inner(const Vector& u, const Vector& v, const InnerProduct& ip);

/// sqrt(inner(u, u, ip)); zero iff u is the zero vector.
double norm(const Vector& u, const InnerProduct& ip);

enum class ConvergenceVerdict { WeakOnly, Strong, Neither };

const char* to_string(ConvergenceVerdict v);

/// Per-step pairings <x_n - limit, u_j> and norm gaps ||x_n - limit||.
struct WeakConvergenceReport {
  Eigen::MatrixXd pairings;  // one row per step, one column per test vector
  Vector norms;              // one entry per step
  ConvergenceVerdict verdict = ConvergenceVerdict::Neither;
};

// Verdict thresholds. WeakOnly requires every final-step pairing magnitude
// at or below kPairingTol while the final norm gap stays at or above
// kSeparationThreshold. Strong requires the norm gap itself to decay, which
// a finite run can only witness as a large relative drop (kNormDecayRatio)
// or an outright fall below kPairingTol.
inline constexpr double kPairingTol = 1e-10;
inline constexpr double kSeparationThreshold = 1e-3;
inline constexpr double kNormDecayRatio = 0.1;

WeakConvergenceReport weak_probe(const std::vector<Vector>& sequence,
                                 const Vector& limit,
                                 const std::vector<Vector>& tests,
                                 const InnerProduct& ip);

}  // namespace convexkit
