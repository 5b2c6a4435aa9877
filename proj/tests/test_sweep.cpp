#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qtele/sweep.hpp"

using namespace qtele;

TEST_CASE("bisection locates quadratic roots and verifies its bracket") {
  const auto quadratic = [](double p) { return 4.0 - 10.0 * p + 67.0 * p * p / 9.0; };
  const ThresholdResult low = find_threshold(quadratic, 1.0, 0.3, 0.6, 1e-6);
  const double expected_low = (90.0 - std::sqrt(8100.0 - 4.0 * 67.0 * 27.0)) / 134.0;
  CHECK(std::abs(low.root - expected_low) < 2e-6);

  const ThresholdResult high = find_threshold(quadratic, 1.0, 0.7, 1.0, 1e-6);
  const double expected_high = (90.0 + std::sqrt(8100.0 - 4.0 * 67.0 * 27.0)) / 134.0;
  CHECK(std::abs(high.root - expected_high) < 2e-6);

  // Nudging the root by 2*tol flips the predicate.
  const bool below = quadratic(low.root - 2e-6) > 1.0;
  const bool above = quadratic(low.root + 2e-6) > 1.0;
  CHECK(below != above);

  CHECK_THROWS_WITH_AS(find_threshold(quadratic, 1.0, 0.5, 0.6, 1e-6),
                       doctest::Contains("no sign change"), std::runtime_error);
}

TEST_CASE("scan finds both usefulness boundaries of the psi-minus mixture") {
  const auto roots = scan_roots(generic_metric_fn(Family::Rho2, BellKind::PsiMinus, "f"),
                                2.0 / 3.0, 0.0, 1.0, 1e-3, 1e-6);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - 0.5) < 2e-6);
  CHECK(std::abs(roots[1] - 0.75) < 2e-6);
}

TEST_CASE("sweep produces ordered rows and rejects bad configs") {
  SweepConfig cfg;
  cfg.families = {{Family::Werner, BellKind::PhiPlus}, {Family::RhoG, BellKind::PhiPlus}};
  cfg.step = 0.25;
  const auto rows = sweep(cfg);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].metrics.family == "werner");
  CHECK(rows[5].metrics.family == "rhog");
  CHECK(rows[1].param == doctest::Approx(0.25));

  SweepConfig bad = cfg;
  bad.step = 0.0;
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
  bad.step = 0.1;
  bad.start = 0.9;
  bad.stop = 0.5;
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
}

TEST_CASE("sweep csv carries full precision plus display columns") {
  SweepConfig cfg;
  cfg.families = {{Family::Werner, BellKind::PhiPlus}};
  cfg.step = 0.5;
  cfg.with_ref = true;
  const auto rows = sweep(cfg);
  std::ostringstream os;
  write_sweep_csv(os, rows, true);
  const std::string text = os.str();
  CHECK(text.find("family,bell,param,C,f,N,L,M,isX,useful,violates") == 0);
  CHECK(text.find("source_eq") != std::string::npos);
  CHECK(text.find("eq22") != std::string::npos);
  // 17-significant-digit rendering of 1/3-like values
  CHECK(text.find("0.33333333333333") != std::string::npos);

  const auto j = sweep_json(rows, true);
  CHECK(j.size() == rows.size());
  CHECK(j[0].contains("refs"));
  const std::string dumped = j.dump();
  CHECK(nlohmann::ordered_json::parse(dumped).dump() == dumped);
}

TEST_CASE("table reproduces the printed fidelity entries") {
  const Table1 t = table1();
  const long long printed[11][4] = {
      {100, 100, 100, 100}, {94, 98, 93, 97}, {89, 96, 87, 93}, {83, 93, 80, 90},
      {78, 91, 73, 87},     {72, 89, 67, 83}, {67, 87, 60, 80}, {67, 84, 64, 77},
      {69, 82, 69, 73},     {73, 80, 73, 70}, {78, 78, 78, 67}};
  for (int i = 0; i < Table1::kRows; ++i) {
    for (int c = 0; c < Table1::kCols; ++c) {
      CHECK(t.cents[static_cast<size_t>(i)][static_cast<size_t>(c)] == printed[i][c]);
      CHECK(std::abs(t.raw[static_cast<size_t>(i)][static_cast<size_t>(c)] -
                     static_cast<double>(printed[i][c]) / 100.0) <= 0.005 + 1e-12);
    }
  }
  const std::string pretty = table1_pretty(t);
  CHECK(pretty.find("0.72") != std::string::npos);
  std::ostringstream os;
  write_table1_csv(os, t);
  CHECK(os.str().find("rho1:phi+") != std::string::npos);
}

TEST_CASE("figure datasets expose the claimed structure") {
  const FigureData fig1 = figure_data(1, 0.01);
  REQUIRE(fig1.rows.size() == 101);
  for (const auto& row : fig1.rows) {
    CHECK(row[2] >= row[4] - 1e-12);  // rho2:psi+ never drops below rhog
  }

  const FigureData fig2 = figure_data(2, 0.01);
  for (const auto& row : fig2.rows) {
    CHECK(row[1] == doctest::Approx(7.0 / 9.0).epsilon(1e-12));  // MEMS reference line
  }

  const FigureData fig3 = figure_data(3, 0.01);
  CHECK(fig3.note.find("0.45") != std::string::npos);
  for (const auto& row : fig3.rows) {
    CHECK((row.back() == 1.0) == (row[0] <= 0.45));
  }

  const FigureData fig4 = figure_data(4, 0.01);
  CHECK(fig4.rows.front()[0] == doctest::Approx(0.5));
  CHECK(fig4.rows.back()[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(figure_data(7), std::invalid_argument);

  std::ostringstream os;
  write_figure_csv(os, fig4);
  CHECK(os.str().find("f_werner") != std::string::npos);
}

TEST_CASE("figure monotonicity claims hold pointwise") {
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const double f_g = generic_metric_fn(Family::RhoG, BellKind::PhiPlus, "f")(p);
    CHECK(f_g == doctest::Approx(1.0 - p / 3.0).epsilon(1e-12));  // affine decreasing
    const double f_2p = generic_metric_fn(Family::Rho2, BellKind::PsiPlus, "f")(p);
    CHECK(f_2p == doctest::Approx(1.0 - 2.0 * p / 9.0).epsilon(1e-12));  // slope -2/9
  }
}

TEST_CASE("claims catalog reproduces or records every boundary") {
  const auto results = run_threshold_claims();
  REQUIRE(results.size() == 11);
  int reproduced = 0, catalogued = 0;
  for (const auto& r : results) {
    if (r.reproduced) ++reproduced;
    else ++catalogued;
    // Catalogued entries still carry the engine route information.
    if (!r.reproduced) {
      bool has_engine_route = false;
      for (const auto& rr : r.routes) {
        if (rr.route == "engine") has_engine_route = true;
      }
      CHECK(has_engine_route);
      CHECK(!r.note.empty());
    }
  }
  CHECK(reproduced == 7);
  CHECK(catalogued == 4);

  // The engine boundary recorded for the psi-minus Bell claim is the root of
  // 29 p^2 - 42 p + 9 (independent oracle: the quadratic formula).
  for (const auto& r : results) {
    if (r.claim.id == "rho2-psi--bell-low") {
      const double expected = (42.0 - std::sqrt(42.0 * 42.0 - 4.0 * 29.0 * 9.0)) / (2.0 * 29.0);
      REQUIRE(!r.reproduced);
      for (const auto& rr : r.routes) {
        if (rr.route == "engine") {
          REQUIRE(rr.roots.size() == 1);
          CHECK(std::abs(rr.roots[0] - expected) < 1e-5);
        }
      }
    }
  }
  const auto j = claims_json(results);
  CHECK(j.size() == 11);
}
