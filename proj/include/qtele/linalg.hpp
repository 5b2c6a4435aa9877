#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qtele {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Matrix8 = Eigen::Matrix<Complex, 8, 8>;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;
using Vector8 = Eigen::Matrix<Complex, 8, 1>;

inline Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2 pauli_y() {
  Matrix2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

/// Pauli by index 1..3 (x, y, z).
inline Matrix2 pauli(int n) {
  switch (n) {
    case 1: return pauli_x();
    case 2: return pauli_y();
    default: return pauli_z();
  }
}

template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = Complex(a(i, j)) * b;
  return out;
}

template <typename Derived>
Matrix dagger(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint();
}

/// Trace out one qubit of a 3-qubit density matrix (big-endian labels:
/// basis index 4*q0 + 2*q1 + q2, q0 being the leftmost ket label).
/// Throws std::invalid_argument for an index outside {0,1,2}.
Matrix partial_trace(const Matrix& rho8, int traced_qubit);

/// Trace out the first two qubits of an 8x8 state, leaving qubit 2.
Matrix2 trace_out_front_pair(const Matrix8& rho8);

/// Partial transpose over the second qubit of a two-qubit state.
Matrix partial_transpose_second(const Matrix& rho4);

struct HermitianEigen {
  Eigen::VectorXd values;  // descending
  Matrix vectors;          // columns match values
};

/// Cyclic complex Jacobi diagonalization for small Hermitian matrices.
/// Rotations are applied until the off-diagonal Frobenius norm drops below
/// 1e-13 times the matrix scale. Throws std::invalid_argument when the
/// input fails the Hermiticity tolerance.
HermitianEigen jacobi_hermitian(Matrix a, double herm_tol = 1e-8);

/// Eigenvalues only, descending.
std::vector<double> hermitian_eigenvalues(const Matrix& a, double herm_tol = 1e-8);

/// Monic characteristic polynomial coefficients of a 4x4 matrix via the
/// Faddeev-LeVerrier recurrence: p(z) = z^4 + c[3] z^3 + c[2] z^2 + c[1] z + c[0].
std::array<Complex, 4> charpoly_4x4(const Matrix& a);

/// Roots of z^4 + c3 z^3 + c2 z^2 + c1 z + c0 by shifted QR iteration on the
/// companion matrix, followed by a Newton polish; clustered roots produced by
/// multiple eigenvalues are replaced by their cluster mean. Throws
/// std::runtime_error with residual diagnostics when the iteration stalls.
std::array<Complex, 4> quartic_roots(Complex c3, Complex c2, Complex c1, Complex c0);

/// General (non-Hermitian) eigenvalues of a 4x4 matrix through the
/// characteristic polynomial route; the coefficients are accumulated in
/// compensated (double-double) arithmetic so that clustered eigenvalues down
/// to ~1e-10 separation stay resolvable.
std::array<Complex, 4> general_eigenvalues_4x4(const Matrix& a);

/// Eigenvalues of the product a*b with the product itself accumulated in
/// compensated arithmetic; used where rounding the product would wash out
/// near-singular spectra (the concurrence cross-check).
std::array<Complex, 4> general_eigenvalues_product_4x4(const Matrix& a, const Matrix& b);

/// Hermitian PSD square root. Eigenvalues in [-clamp_tol, 0) are clamped to
/// zero; anything more negative throws std::invalid_argument.
Matrix psd_sqrt(const Matrix& a, double clamp_tol = 1e-9);

/// Clamp small negatives per the shared tolerance policy: values in
/// [-clamp_tol, 0) become 0, more negative values throw.
double clamp_small_negative(double x, double clamp_tol = 1e-9);

}  // namespace qtele
