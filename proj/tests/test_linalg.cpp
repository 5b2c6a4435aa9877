#include <doctest.h>

#include "qtele/density.hpp"
#include "qtele/linalg.hpp"
#include "qtele/states.hpp"
#include "support.hpp"

using namespace qtele;
using test::max_abs_diff;

TEST_CASE("kron identity and pauli blocks") {
  CHECK(max_abs_diff(kron(Matrix2::Identity(), Matrix2::Identity()), Matrix::Identity(4, 4)) ==
        0.0);

  Matrix expected(4, 4);
  expected.setZero();
  expected(0, 3) = -1;
  expected(1, 2) = 1;
  expected(2, 1) = 1;
  expected(3, 0) = -1;
  CHECK(max_abs_diff(kron(pauli_y(), pauli_y()), expected) < 1e-15);

  Matrix2 p00;
  p00 << 1, 0, 0, 0;
  Matrix d(4, 4);
  d.setZero();
  d(0, 0) = 1;
  CHECK(max_abs_diff(kron(p00, p00), d) == 0.0);
}

TEST_CASE("kron is associative on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = test::random_complex_matrix(rng, 2);
    const Matrix b = test::random_complex_matrix(rng, 2);
    const Matrix c = test::random_complex_matrix(rng, 2);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
  }
}

TEST_CASE("dagger basics") {
  CHECK(max_abs_diff(dagger(Matrix::Identity(4, 4)), Matrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs_diff(dagger(pauli_y()), pauli_y()) == 0.0);
  Rng rng(5);
  const Matrix a = test::random_complex_matrix(rng, 4);
  CHECK(max_abs_diff(dagger(dagger(a)), a) == 0.0);
}

TEST_CASE("partial trace of W projector leaves the MEMS mixture") {
  const Vector8 w = tripartite_state(TripartiteKind::W);
  const Matrix reduced = partial_trace(w * w.adjoint(), 2);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0 / 3.0;
  const Matrix4 psi_plus = bell_projector(BellKind::PsiPlus);
  expected += (2.0 / 3.0) * psi_plus;
  CHECK(max_abs_diff(reduced, expected) < 1e-14);
}

TEST_CASE("partial trace of GHZ is the classical mixture for any qubit") {
  const Vector8 ghz = tripartite_state(TripartiteKind::Ghz);
  for (int q = 0; q < 3; ++q) {
    const Matrix reduced = partial_trace(ghz * ghz.adjoint(), q);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    CHECK(max_abs_diff(reduced, expected) < 1e-14);
  }
}

TEST_CASE("partial trace removes an unentangled ancilla") {
  Matrix2 zero_proj;
  zero_proj << 1, 0, 0, 0;
  const Matrix total = kron(bell_projector(BellKind::PhiPlus), zero_proj);
  CHECK(max_abs_diff(partial_trace(total, 2), bell_projector(BellKind::PhiPlus)) < 1e-14);
}

TEST_CASE("partial trace rejects a bad qubit index") {
  const Vector8 w = tripartite_state(TripartiteKind::W);
  CHECK_THROWS_AS(partial_trace(w * w.adjoint(), 3), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(w * w.adjoint(), -1), std::invalid_argument);
}

TEST_CASE("partial trace preserves trace and positivity on random 3-qubit states") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix rho = test::random_density(rng, 8);
    const Matrix reduced = partial_trace(rho, static_cast<int>(rng.next_u64() % 3));
    CHECK(std::abs(reduced.trace().real() - 1.0) < 1e-12);
    const auto evals = hermitian_eigenvalues(reduced);
    CHECK(evals.back() > -1e-12);
  }
}

TEST_CASE("hermitian eigenvalues on simple spectra") {
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 0.4;
  d(1, 1) = 0.3;
  d(2, 2) = 0.2;
  d(3, 3) = 0.1;
  const auto evals = hermitian_eigenvalues(d);
  CHECK(evals[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(evals[3] == doctest::Approx(0.1).epsilon(1e-14));

  const auto bell = hermitian_eigenvalues(bell_projector(BellKind::PhiPlus));
  CHECK(bell[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(bell[1]) < 1e-13);

  const Matrix werner_pure = materialize(StateFamily{Family::Werner, BellKind::PhiPlus, 1.0}).matrix();
  const auto wv = hermitian_eigenvalues(werner_pure);
  CHECK(wv[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(wv[3]) < 1e-13);
}

TEST_CASE("hermitian eigenvalue sum matches the trace") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = test::random_complex_matrix(rng, 4);
    a = (a + a.adjoint()).eval();
    const auto evals = hermitian_eigenvalues(a);
    double sum = 0;
    for (double v : evals) sum += v;
    CHECK(sum == doctest::Approx(a.trace().real()).epsilon(1e-11));
  }
}

TEST_CASE("non-hermitian input is rejected") {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigenvalues(a), std::invalid_argument);
}

TEST_CASE("general 4x4 eigenvalues: identity and wootters products") {
  const auto id = general_eigenvalues_4x4(Matrix::Identity(4, 4));
  for (const Complex& z : id) {
    CHECK(std::abs(z - Complex(1, 0)) < 1e-10);
  }

  // rho * rho_tilde for a Bell projector has spectrum {1, 0, 0, 0}.
  const Matrix4 phi = bell_projector(BellKind::PhiPlus);
  const Matrix4 yy = kron(pauli_y(), pauli_y());
  const Matrix prod = phi * (yy * phi.conjugate() * yy);
  auto roots = general_eigenvalues_4x4(prod);
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return a.real() > b.real(); });
  CHECK(std::abs(roots[0] - Complex(1, 0)) < 1e-9);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(roots[static_cast<size_t>(i)]) < 1e-9);

  const Matrix quarter = 0.25 * Matrix::Identity(4, 4);
  const Matrix prod2 = quarter * (yy * quarter.conjugate() * yy);
  for (const Complex& z : general_eigenvalues_4x4(prod2)) {
    CHECK(std::abs(z - Complex(1.0 / 16.0, 0)) < 1e-10);
  }
}

TEST_CASE("hermitian and general eigenvalue routes agree on random PSD inputs") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix rho = test::random_density(rng, 4);
    const auto hv = hermitian_eigenvalues(rho);
    auto gv = general_eigenvalues_4x4(rho);
    std::sort(gv.begin(), gv.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(gv[static_cast<size_t>(i)].imag()) < 1e-8);
      CHECK(std::abs(gv[static_cast<size_t>(i)].real() - hv[static_cast<size_t>(i)]) < 1e-8);
    }
  }
}

TEST_CASE("psd sqrt fixed points and reconstruction") {
  CHECK(max_abs_diff(psd_sqrt(Matrix::Identity(4, 4)), Matrix::Identity(4, 4)) < 1e-13);

  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 4;
  d(1, 1) = 1;
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 2;
  expected(1, 1) = 1;
  CHECK(max_abs_diff(psd_sqrt(d), expected) < 1e-13);

  const Matrix4 phi = bell_projector(BellKind::PhiPlus);
  CHECK(max_abs_diff(psd_sqrt(phi), phi) < 1e-13);

  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix rho = test::random_density(rng, 4);
    const Matrix root = psd_sqrt(rho);
    CHECK((root * root - rho).norm() < 1e-9);
  }
}

TEST_CASE("psd sqrt rejects significantly negative spectra") {
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = -1e-3;
  CHECK_THROWS_AS(psd_sqrt(d), std::invalid_argument);
}

TEST_CASE("density validation separates violation kinds") {
  CHECK(validate_density(0.25 * Matrix::Identity(4, 4)).ok());

  Matrix bad_trace = Matrix::Zero(4, 4);
  bad_trace(0, 0) = 1;
  bad_trace(3, 3) = 1;
  const auto r1 = validate_density(bad_trace);
  REQUIRE(!r1.ok());
  CHECK(r1.violations.size() == 1);
  CHECK(r1.violations[0].kind == DensityViolationKind::Trace);

  Matrix bad_psd = Matrix::Zero(4, 4);
  bad_psd(0, 0) = 1.5;
  bad_psd(1, 1) = -0.5;
  const auto r2 = validate_density(bad_psd);
  REQUIRE(!r2.ok());
  CHECK(r2.violations.size() == 1);
  CHECK(r2.violations[0].kind == DensityViolationKind::Positivity);

  Matrix bad_herm = 0.25 * Matrix::Identity(4, 4);
  bad_herm(0, 1) = Complex(0, 1e-3);
  const auto r3 = validate_density(bad_herm);
  REQUIRE(!r3.ok());
  CHECK(r3.violations[0].kind == DensityViolationKind::Hermiticity);

  const auto r4 = validate_density(Matrix::Identity(3, 3) / 3.0);
  REQUIRE(!r4.ok());
  CHECK(r4.violations[0].kind == DensityViolationKind::Dimension);
}

TEST_CASE("clamping policy") {
  CHECK(clamp_small_negative(-1e-10) == 0.0);
  CHECK(clamp_small_negative(0.5) == 0.5);
  CHECK_THROWS_AS(clamp_small_negative(-1e-6), std::invalid_argument);
}
