#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "qtele/density.hpp"
#include "qtele/states.hpp"

namespace qtele {

/// Spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
Matrix4 spin_flip(const Matrix4& rho);

/// Square roots of the eigenvalues of rho*rho_tilde, descending. Two routes:
/// the Hermitian one diagonalizes sqrt(rho) rho_tilde sqrt(rho) with Jacobi
/// rotations, the characteristic-polynomial one takes the quartic roots of
/// rho*rho_tilde directly. They are cross-checked in the property suite.
std::array<double, 4> wootters_values_hermitian(const Matrix4& rho);
std::array<double, 4> wootters_values_charpoly(const Matrix4& rho);

/// Wootters concurrence, max(0, l1 - l2 - l3 - l4), via the Hermitian route.
double concurrence(const Matrix4& rho);
double concurrence_charpoly(const Matrix4& rho);

/// 3x3 correlation matrix t[n][m] = tr(rho sigma_n x sigma_m). Throws when an
/// imaginary residue above 1e-9 shows up in a trace.
Eigen::Matrix3d correlation_matrix(const Matrix4& rho);

/// Eigenvalues of T^T T, descending.
std::array<double, 3> correlation_eigenvalues(const Matrix4& rho);

/// N(rho) = sum_i sqrt(u_i); the channel is useful for standard
/// teleportation iff N > 1.
double n_value(const Matrix4& rho);

/// Optimal teleportation fidelity (1 + N/3)/2.
double teleport_fidelity(const Matrix4& rho);

/// Normalized linear entropy (4/3)(1 - tr rho^2).
double linear_entropy(const Matrix4& rho);

/// Bell-CHSH indicator: sum of the two largest eigenvalues of T^T T; the
/// inequality is violated iff M > 1.
double bell_chsh_m(const Matrix4& rho);

/// Minimum eigenvalue of the partial transpose over the second qubit;
/// negative iff entangled (two-qubit Peres-Horodecki).
double ppt_min_eigenvalue(const Matrix4& rho);

struct MetricsReport {
  std::string family;
  std::string bell;
  double param = 0.0;
  double concurrence = 0.0;
  double fidelity = 0.0;
  double n_value = 0.0;
  double linear_entropy = 0.0;
  double m_value = 0.0;
  bool is_x = false;
  bool useful_for_teleport = false;
  bool violates_bell = false;

  static MetricsReport evaluate(const StateFamily& fam, const DensityMatrix& rho);
  static MetricsReport evaluate(std::string family, std::string bell, double param,
                                const Matrix4& rho);

  nlohmann::ordered_json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Half-away-from-zero rounding to two decimals, returned in cents.
long long round_cents(double x);

/// Full-precision formatting (17 significant digits) used by every CSV.
std::string format_full(double x);

}  // namespace qtele
