#pragma once

#include "qtele/density.hpp"
#include "qtele/linalg.hpp"
#include "qtele/teleport.hpp"

namespace qtele::test {

inline Matrix random_complex_matrix(Rng& rng, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

/// Ginibre construction: G G^dagger normalized to unit trace.
inline Matrix random_density(Rng& rng, int n) {
  const Matrix g = random_complex_matrix(rng, n);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

inline Matrix2 random_unitary2(Rng& rng) {
  const Matrix g = random_complex_matrix(rng, 2);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q.block<2, 2>(0, 0);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qtele::test
