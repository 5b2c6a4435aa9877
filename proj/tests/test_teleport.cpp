#include <doctest.h>

#include "qtele/metrics.hpp"
#include "qtele/teleport.hpp"
#include "support.hpp"

using namespace qtele;

TEST_CASE("rng is deterministic and haar samples are unit vectors") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(123);
  for (int i = 0; i < 10; ++i) {
    const Vector2 v = haar_random_qubit(c);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  }
  Rng d(123), e(123);
  for (int i = 0; i < 5; ++i) {
    const Vector2 v1 = haar_random_qubit(d);
    const Vector2 v2 = haar_random_qubit(e);
    CHECK((v1 - v2).norm() == 0.0);
  }
}

TEST_CASE("haar distribution covers the bloch sphere uniformly") {
  Rng rng(55);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vector2 v = haar_random_qubit(rng);
    acc += std::norm(v(0));
  }
  CHECK(std::abs(acc / n - 0.5) < 0.005);
}

TEST_CASE("ideal channel teleports perfectly") {
  Rng rng(9);
  const Matrix4 ch = bell_projector(BellKind::PhiPlus);
  for (int i = 0; i < 20; ++i) {
    const Vector2 chi = haar_random_qubit(rng);
    CHECK(teleport_once(ch, chi) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("maximally mixed channel scores one half for every input") {
  Rng rng(13);
  const Matrix4 ch = 0.25 * Matrix4::Identity();
  for (int i = 0; i < 20; ++i) {
    CHECK(teleport_once(ch, haar_random_qubit(rng)) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("outcome probabilities always sum to one") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix4 ch = test::random_density(rng, 4);
    const auto b = teleport_once_detailed(ch, haar_random_qubit(rng));
    double total = 0.0;
    for (double p : b.outcome_probability) total += p;
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("aligned werner channel reproduces the linear fidelity law") {
  for (double m : {0.5, 0.8, 1.0}) {
    TeleportRun tr;
    tr.channel = materialize(StateFamily{Family::Werner, BellKind::PhiPlus, m}).matrix();
    tr.samples = 20000;
    tr.seed = 2024;
    tr.pre_rotation = singlet_alignment_rotation();
    const SimResult res = run(tr);
    CHECK(std::abs(res.mean_fidelity - (2.0 * m + 1.0) / 3.0) <=
          3.0 * res.std_error + 1e-12);
  }
}

TEST_CASE("alignment rotation maps the werner state onto the phi+ form") {
  const double m = 0.6;
  const Matrix4 werner = materialize(StateFamily{Family::Werner, BellKind::PhiPlus, m}).matrix();
  const auto [u1, u2] = singlet_alignment_rotation();
  const Matrix u = kron(u1, u2);
  const Matrix rotated = u * werner * u.adjoint();
  const Matrix expected = ((1.0 - m) / 3.0) * Matrix::Identity(4, 4) +
                          ((4.0 * m - 1.0) / 3.0) * bell_projector(BellKind::PhiPlus);
  CHECK(test::max_abs_diff(rotated, expected) < 1e-14);
}

TEST_CASE("simulated mean never beats the optimal fidelity") {
  const std::vector<StateFamily> channels = {
      {Family::Werner, BellKind::PhiPlus, 0.1},
      {Family::Werner, BellKind::PhiPlus, 0.9},
      {Family::Rho1, BellKind::PhiPlus, 0.5},
      {Family::Tau1, BellKind::PhiPlus, 0.7},
      {Family::Rho6, BellKind::PsiMinus, 0.4},
  };
  for (const auto& sf : channels) {
    TeleportRun tr;
    tr.channel = materialize(sf).matrix();
    tr.samples = 4000;
    tr.seed = 99;
    const SimResult res = run(tr);
    CHECK(res.mean_fidelity <= teleport_fidelity(tr.channel) + 3.0 * res.std_error + 1e-12);
  }
}

TEST_CASE("runs are reproducible and shard plans merge identically") {
  TeleportRun tr;
  tr.channel = materialize(StateFamily{Family::Rho1, BellKind::PhiPlus, 0.3}).matrix();
  tr.samples = 5000;
  tr.seed = 31337;
  tr.shards = 4;
  const SimResult threaded = run(tr);
  const SimResult threaded_again = run(tr);
  CHECK(threaded.mean_fidelity == threaded_again.mean_fidelity);
  CHECK(threaded.std_error == threaded_again.std_error);

  tr.threaded = false;
  const SimResult sequential = run(tr);
  CHECK(threaded.mean_fidelity == sequential.mean_fidelity);
  CHECK(threaded.std_error == sequential.std_error);
  for (int k = 0; k < 4; ++k) {
    CHECK(threaded.per_outcome_fidelity[static_cast<size_t>(k)] ==
          sequential.per_outcome_fidelity[static_cast<size_t>(k)]);
  }
}

TEST_CASE("invalid run configurations are rejected") {
  TeleportRun tr;
  tr.channel = bell_projector(BellKind::PhiPlus);
  tr.samples = 0;
  CHECK_THROWS_AS(run(tr), std::invalid_argument);
  tr.samples = 10;
  Matrix2 not_unitary;
  not_unitary << 1, 0, 0, 2;
  tr.pre_rotation = std::pair{not_unitary, Matrix2::Identity()};
  CHECK_THROWS_AS(run(tr), std::invalid_argument);
}

TEST_CASE("sim result serializes with the seed echoed") {
  TeleportRun tr;
  tr.channel = bell_projector(BellKind::PhiPlus);
  tr.samples = 100;
  tr.seed = 424242;
  const auto j = run(tr).to_json();
  CHECK(j["seed"] == 424242);
  CHECK(j["rng"] == std::string(Rng::kName));
}
