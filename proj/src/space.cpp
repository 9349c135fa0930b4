#include "convexkit/space.hpp"

#include <cmath>

namespace convexkit {

void check_vector(const Vector& v, const char* what) {
  if (v.size() < 1) {
    throw DimensionError(std::string(what) + ": dimension must be >= 1");
  }
  if (!v.allFinite()) {
    throw NumericError(std::string(what) + ": entries must be finite");
  }
}

InnerProduct InnerProduct::diagonal_weighted(Vector weights) {
  check_vector(weights, "weights");
  if ((weights.array() <= 0.0).any()) {
    throw PreconditionError(
        "InnerProduct: diagonal weights must be strictly positive");
  }
  InnerProduct ip;
  ip.form_ = DiagonalWeightedForm{std::move(weights)};
  return ip;
}

InnerProduct InnerProduct::laplacian_energy(Grid grid) {
  InnerProduct ip;
  ip.form_ = LaplacianEnergyForm{grid};
  return ip;
}

std::optional<Eigen::Index> InnerProduct::expected_dim() const {
  if (const auto* w = std::get_if<DiagonalWeightedForm>(&form_)) {
    return w->weights.size();
  }
  if (const auto* l = std::get_if<LaplacianEnergyForm>(&form_)) {
    return l->grid.unknowns();
  }
  return std::nullopt;
}

double inner(const Vector& u, const Vector& v, const InnerProduct& ip) {
  check_vector(u, "u");
  check_vector(v, "v");
  require_same_dim(u.size(), v.size(), "inner");
  if (auto dim = ip.expected_dim()) {
    require_same_dim(u.size(), *dim, "inner (inner product form)");
  }
  return std::visit(
      [&](const auto& form) -> double {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, StandardForm>) {
          return u.dot(v);
        } else if constexpr (std::is_same_v<T, DiagonalWeightedForm>) {
          return (u.array() * form.weights.array() * v.array()).sum();
        } else {
          return u.dot(apply_laplacian(form.grid, v));
        }
      },
      ip.form());
}

double norm(const Vector& u, const InnerProduct& ip) {
  return std::sqrt(inner(u, u, ip));
}

const char* to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::WeakOnly: return "weak_only";
    case ConvergenceVerdict::Strong: return "strong";
    case ConvergenceVerdict::Neither: return "neither";
  }
  return "?";
}

WeakConvergenceReport weak_probe(const std::vector<Vector>& sequence,
                                 const Vector& limit,
                                 const std::vector<Vector>& tests,
                                 const InnerProduct& ip) {
  if (sequence.empty()) {
    throw PreconditionError("weak_probe: sequence must be non-empty");
  }
  check_vector(limit, "limit");
  const Eigen::Index dim = limit.size();
  for (const Vector& u : tests) require_same_dim(u.size(), dim, "weak_probe");

  const auto steps = static_cast<Eigen::Index>(sequence.size());
  WeakConvergenceReport report;
  report.pairings.resize(steps, static_cast<Eigen::Index>(tests.size()));
  report.norms.resize(steps);

  for (Eigen::Index n = 0; n < steps; ++n) {
    require_same_dim(sequence[n].size(), dim, "weak_probe");
    const Vector gap = sequence[n] - limit;
    for (std::size_t j = 0; j < tests.size(); ++j) {
      report.pairings(n, static_cast<Eigen::Index>(j)) =
          inner(gap, tests[j], ip);
    }
    report.norms[n] = norm(gap, ip);
  }

  const double final_norm = report.norms[steps - 1];
  const double first_norm = report.norms[0];
  const double final_pairing =
      tests.empty() ? 0.0
                    : report.pairings.row(steps - 1).cwiseAbs().maxCoeff();

  const bool norm_decays =
      final_norm <= std::max(kPairingTol, kNormDecayRatio * first_norm);
  if (norm_decays) {
    report.verdict = ConvergenceVerdict::Strong;
  } else if (final_pairing <= kPairingTol &&
             final_norm >= kSeparationThreshold) {
    report.verdict = ConvergenceVerdict::WeakOnly;
  } else {
    report.verdict = ConvergenceVerdict::Neither;
  }
  return report;
}

}  // namespace convexkit
