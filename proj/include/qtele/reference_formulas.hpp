#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtele/metrics.hpp"
#include "qtele/states.hpp"

namespace qtele {

/// Entries of an X-shaped two-qubit state
///   [[alpha, 0, 0, eta], [0, beta, xi, 0], [0, xi*, gamma, 0], [eta*, 0, 0, delta]].
struct XEntries {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  Complex xi{0, 0}, eta{0, 0};
};

/// Extracts X entries; throws std::invalid_argument when the state is not of
/// X shape within tol.
XEntries x_entries(const Matrix4& rho, double tol = 1e-9);

/// 2 max(0, |xi| - sqrt(alpha delta), |eta| - sqrt(beta gamma)).
double x_concurrence(const XEntries& e);

/// 1/2 + (|2 eta + 2 xi| + |-2 eta + 2 xi| + |alpha - beta - gamma + delta|)/6,
/// with sqrt(x^2) read as |x|. Real X entries assumed.
double x_fidelity(const XEntries& e);

/// 4/3 - 4/3 (alpha^2 + beta^2 + gamma^2 + delta^2) - 8/3 (eta^2 + xi^2).
double x_mixedness(const XEntries& e);

/// Eigenvalues of T^T T for a real X state: the squared diagonal correlations
/// (2(xi+eta))^2, (2(xi-eta))^2, (alpha-beta-gamma+delta)^2, descending.
/// Contract: matches correlation_eigenvalues of the same state.
std::array<double, 3> x_ttdagger_eigs(const XEntries& e);

/// The reference triple as printed: 8(xi^2+eta^2), (-2 eta + 2 xi)^2 + t33^2,
/// (2 eta + 2 xi)^2 + t33^2. Kept for cross-checking; it does not match the
/// spectrum of T^T T away from xi*eta = 0, t33 = 0 and the comparison reports
/// record that.
std::array<double, 3> x_ttdagger_eigs_printed(const XEntries& e);

enum class RefStatus { Match, Mismatch };

/// One printed closed-form expression evaluated against the generic engine.
struct ClosedFormReport {
  std::string family;
  std::string bell;
  double param = 0;
  std::string metric;     // C, f, L, M, u1, u2, u3
  std::string source_eq;  // which printed expression
  double closed_value = 0;
  double generic_value = 0;
  double abs_delta = 0;
  double tolerance = 1e-9;
  RefStatus status = RefStatus::Match;
};

/// Every printed closed form applicable to the family at this parameter,
/// compared against the generic engine. Piecewise concurrence branches are
/// only emitted inside their stated validity ranges. Mismatching rows are
/// data, not errors.
std::vector<ClosedFormReport> family_closed_forms(const StateFamily& fam);

/// Printed single-parameter reference function for (family, flavor, metric),
/// when one exists; used as the closed-form route in threshold location.
/// Metric is one of "C", "f", "L", "M".
std::optional<std::function<double(double)>> reference_metric_fn(Family f, BellKind bell,
                                                                 const std::string& metric);

std::string ref_status_token(RefStatus s);

}  // namespace qtele
