#include <doctest.h>

#include "qtele/metrics.hpp"
#include "support.hpp"

using namespace qtele;
using test::max_abs_diff;

namespace {

Matrix4 fam(Family f, BellKind b, double p) {
  return materialize(StateFamily{f, b, p}).matrix();
}

}  // namespace

TEST_CASE("spin flip fixed points") {
  const Matrix4 phi = bell_projector(BellKind::PhiPlus);
  CHECK(max_abs_diff(spin_flip(phi), phi) < 1e-15);
  const Matrix4 mixed = 0.25 * Matrix4::Identity();
  CHECK(max_abs_diff(spin_flip(mixed), mixed) < 1e-15);

  Matrix4 p00 = Matrix4::Zero();
  p00(0, 0) = 1;
  Matrix4 p11 = Matrix4::Zero();
  p11(3, 3) = 1;
  CHECK(max_abs_diff(spin_flip(p00), p11) < 1e-15);
}

TEST_CASE("concurrence landmarks") {
  for (auto kind :
       {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus}) {
    CHECK(concurrence(bell_projector(kind)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(concurrence(0.25 * Matrix4::Identity()) == doctest::Approx(0.0));
  CHECK(concurrence(fam(Family::MemsW, BellKind::PhiPlus, 0.0)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(concurrence(reduced_pair(TripartiteKind::Star, 0).rho) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("correlation matrices of the landmark states") {
  Eigen::Matrix3d expected;
  expected << 1, 0, 0, 0, -1, 0, 0, 0, 1;
  CHECK((correlation_matrix(bell_projector(BellKind::PhiPlus)) - expected).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(correlation_matrix(0.25 * Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((correlation_matrix(bell_projector(BellKind::PsiMinus)) +
         Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("fidelity and n-value landmarks") {
  CHECK(n_value(bell_projector(BellKind::PsiPlus)) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(teleport_fidelity(bell_projector(BellKind::PsiPlus)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(teleport_fidelity(fam(Family::MemsW, BellKind::PhiPlus, 0.0)) ==
        doctest::Approx(7.0 / 9.0).epsilon(1e-13));
  for (double m : {0.25, 0.5, 0.75, 1.0}) {
    CHECK(teleport_fidelity(fam(Family::Werner, BellKind::PhiPlus, m)) ==
          doctest::Approx((1.0 + 2.0 * m) / 3.0).epsilon(1e-13));
  }
  // Below the quarter point the engine value follows the |4m-1| form instead.
  CHECK(teleport_fidelity(fam(Family::Werner, BellKind::PhiPlus, 0.0)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("linear entropy landmarks") {
  CHECK(linear_entropy(bell_projector(BellKind::PhiMinus)) == doctest::Approx(0.0));
  CHECK(linear_entropy(0.25 * Matrix4::Identity()) == doctest::Approx(1.0));
  CHECK(linear_entropy(fam(Family::MemsW, BellKind::PhiPlus, 0.0)) ==
        doctest::Approx(16.0 / 27.0).epsilon(1e-13));
}

TEST_CASE("bell-chsh landmarks") {
  CHECK(bell_chsh_m(bell_projector(BellKind::PhiPlus)) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(bell_chsh_m(0.25 * Matrix4::Identity()) == doctest::Approx(0.0));
}

TEST_CASE("ppt witness landmarks") {
  CHECK(ppt_min_eigenvalue(bell_projector(BellKind::PhiPlus)) ==
        doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(ppt_min_eigenvalue(0.25 * Matrix4::Identity()) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(ppt_min_eigenvalue(fam(Family::Werner, BellKind::PhiPlus, 0.25)) ==
        doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("ppt sign matches concurrence positivity on a family grid") {
  for (const auto& v : all_family_variants()) {
    for (int i = 0; i <= 100; ++i) {
      const double p = i / 100.0;
      const Matrix4 rho = fam(v.family, v.bell, p);
      const bool entangled_c = concurrence(rho) > 1e-7;
      const bool entangled_ppt = ppt_min_eigenvalue(rho) < -1e-7;
      CHECK(entangled_c == entangled_ppt);
    }
  }
}

TEST_CASE("bell violation implies teleportation usefulness on family grids") {
  for (const auto& v : all_family_variants()) {
    for (int i = 0; i <= 100; ++i) {
      const double p = i / 100.0;
      const Matrix4 rho = fam(v.family, v.bell, p);
      if (bell_chsh_m(rho) > 1.0) CHECK(n_value(rho) > 1.0);
    }
  }
}

TEST_CASE("fidelity is exactly (1 + N/3)/2") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix4 rho = test::random_density(rng, 4);
    CHECK(std::abs(teleport_fidelity(rho) - 0.5 * (1.0 + n_value(rho) / 3.0)) < 1e-12);
  }
}

TEST_CASE("concurrence is invariant under local unitaries") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix4 rho = test::random_density(rng, 4);
    const double c = concurrence(rho);
    const Matrix u = kron(test::random_unitary2(rng), test::random_unitary2(rng));
    const Matrix4 rotated = u * rho * u.adjoint();
    CHECK(std::abs(concurrence(rotated) - c) < 1e-8);
  }
}

TEST_CASE("both wootters eigenvalue routes agree") {
  Rng rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix4 rho = test::random_density(rng, 4);
    const auto a = wootters_values_hermitian(rho);
    const auto b = wootters_values_charpoly(rho);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)]) < 1e-8);
  }
  // Family states bring exact eigenvalue multiplicities into the quartic.
  for (const auto& v : all_family_variants()) {
    for (int i = 0; i <= 20; ++i) {
      const double p = i / 20.0;
      const Matrix4 rho = fam(v.family, v.bell, p);
      CHECK(std::abs(concurrence(rho) - concurrence_charpoly(rho)) < 1e-8);
    }
  }
}

TEST_CASE("correlation traces with imaginary residue are rejected") {
  Matrix4 crooked = Matrix4::Zero();
  crooked(0, 3) = Complex(0, 0.3);  // non-Hermitian: the x-x trace turns imaginary
  crooked(0, 0) = 1.0;
  CHECK_THROWS_AS(correlation_matrix(crooked), std::runtime_error);
}

TEST_CASE("correlation matrix entries stay within physical bounds") {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Matrix3d t = correlation_matrix(test::random_density(rng, 4));
    CHECK(t.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
  }
}

TEST_CASE("metrics report carries flags and serializes losslessly") {
  const StateFamily werner{Family::Werner, BellKind::PhiPlus, 0.7};
  const MetricsReport rep = MetricsReport::evaluate(werner, materialize(werner));
  CHECK(rep.family == "werner");
  CHECK(rep.bell.empty());
  CHECK(rep.useful_for_teleport);
  // entangled yet Bell-satisfying: M = 2((4m-1)/3)^2 stays below 1 up to m ~ 0.78
  CHECK(!rep.violates_bell);
  CHECK(rep.concurrence == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.is_x);

  const std::string dumped = rep.to_json().dump(2);
  const auto parsed = nlohmann::ordered_json::parse(dumped);
  CHECK(parsed.dump(2) == dumped);  // byte-identical round trip

  const std::string header = MetricsReport::csv_header();
  const std::string row = rep.csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(row.begin(), row.end(), ','));
}

TEST_CASE("report invariant: bell violation implies usefulness flag") {
  for (const auto& v : all_family_variants()) {
    for (int i = 0; i <= 50; ++i) {
      const StateFamily sf{v.family, v.bell, i / 50.0};
      const MetricsReport rep = MetricsReport::evaluate(sf, materialize(sf));
      if (rep.violates_bell) CHECK(rep.useful_for_teleport);
    }
  }
}
