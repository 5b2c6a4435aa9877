#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtele/reference_formulas.hpp"
#include "qtele/states.hpp"

namespace qtele {

struct SweepConfig {
  std::vector<FamilyVariant> families;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.001;
  bool with_ref = false;
};

struct SweepRow {
  FamilyVariant variant;
  double param = 0.0;
  MetricsReport metrics;
  std::vector<ClosedFormReport> refs;
};

/// One row per (family, grid point), ordered by (family, param) regardless of
/// execution order.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool with_ref);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows, bool with_ref);

/// Generic-engine metric ("C", "f", "L", "M", "N") as a function of the
/// family parameter.
std::function<double(double)> generic_metric_fn(Family f, BellKind bell,
                                                const std::string& metric);

struct ThresholdResult {
  double lo = 0, hi = 0;      // initial bracket
  double f_lo = 0, f_hi = 0;  // metric values at the bracket ends
  double root = 0;
  double tol = 1e-6;
  int iterations = 0;
};

/// Bisection for the predicate `fn(x) > threshold` changing truth value
/// across [lo, hi]; terminates when the bracket is within 2*tol and reports
/// the midpoint. Throws std::runtime_error naming the bracket and sampled
/// endpoint values when there is no sign change.
ThresholdResult find_threshold(const std::function<double(double)>& fn, double threshold,
                               double lo, double hi, double tol = 1e-6);

/// All predicate boundaries of fn(x) > threshold inside [lo, hi], located by
/// a fixed-step scan plus bisection per sign-change cell.
std::vector<double> scan_roots(const std::function<double(double)>& fn, double threshold,
                               double lo = 0.0, double hi = 1.0, double scan_step = 1e-3,
                               double tol = 1e-6);

/// A boundary-of-usefulness claim under test: where `metric` crosses
/// `threshold` for the family, against the claimed parameter value.
struct ThresholdClaim {
  std::string id;
  Family family = Family::Rho1;
  BellKind bell = BellKind::PhiPlus;
  std::string metric;  // C, f, M
  double threshold = 1.0;
  double claimed = 0.0;
  std::string description;
};

struct RouteRoots {
  std::string route;  // "reference" or "engine"
  std::vector<double> roots;
};

struct ClaimResult {
  ThresholdClaim claim;
  std::vector<RouteRoots> routes;
  bool reproduced = false;
  std::string reproduced_by;
  std::optional<double> matched_root;
  std::string note;
};

std::vector<ThresholdClaim> builtin_threshold_claims();
ClaimResult evaluate_claim(const ThresholdClaim& claim, double tol = 1e-6,
                           double accept_window = 0.01);
std::vector<ClaimResult> run_threshold_claims(double tol = 1e-6, double accept_window = 0.01);
nlohmann::ordered_json claims_json(const std::vector<ClaimResult>& results);

struct Table1 {
  static constexpr int kRows = 11;
  static constexpr int kCols = 4;
  std::array<double, kRows> params{};
  std::array<std::array<double, kCols>, kRows> raw{};
  std::array<std::array<long long, kCols>, kRows> cents{};  // rounded, in hundredths
  static const std::array<std::string, kCols>& column_names();
};

/// Fidelity summary table over p = 0.0 .. 1.0 step 0.1 for rho1:phi+,
/// rho2:psi+, rho2:psi- and rhog.
Table1 table1();
std::string table1_pretty(const Table1& t);
void write_table1_csv(std::ostream& os, const Table1& t);
nlohmann::ordered_json table1_json(const Table1& t);

struct FigureData {
  int id = 0;
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string note;
};

/// Datasets behind the four comparison figures. Columns suffixed _ref carry
/// the printed closed-form curve where it differs from the engine.
FigureData figure_data(int id, double step = 0.001);
void write_figure_csv(std::ostream& os, const FigureData& fig);

}  // namespace qtele
