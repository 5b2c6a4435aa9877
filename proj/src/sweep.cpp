#include "qtele/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qtele {

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  if (!(cfg.start >= 0.0 && cfg.start < cfg.stop && cfg.stop <= 1.0)) {
    throw std::invalid_argument("sweep: require 0 <= start < stop <= 1");
  }
  if (!(cfg.step > 0.0)) throw std::invalid_argument("sweep: step must be positive");
  std::vector<SweepRow> rows;
  for (const FamilyVariant& v : cfg.families) {
    const long n = std::lround((cfg.stop - cfg.start) / cfg.step);
    for (long i = 0; i <= n; ++i) {
      const double p = std::min(cfg.stop, cfg.start + cfg.step * static_cast<double>(i));
      const StateFamily fam{v.family, v.bell, p};
      SweepRow row;
      row.variant = v;
      row.param = p;
      row.metrics = MetricsReport::evaluate(fam, materialize(fam));
      if (cfg.with_ref) row.refs = family_closed_forms(fam);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool with_ref) {
  os << MetricsReport::csv_header();
  if (with_ref) os << ",source_eq,ref_metric,closed_value,delta,status";
  os << '\n';
  for (const auto& row : rows) {
    if (!with_ref || row.refs.empty()) {
      os << row.metrics.csv_row();
      if (with_ref) os << ",,,,,";
      os << '\n';
      continue;
    }
    for (const auto& ref : row.refs) {
      os << row.metrics.csv_row() << ',' << ref.source_eq << ',' << ref.metric << ','
         << format_full(ref.closed_value) << ',' << format_full(ref.abs_delta) << ','
         << ref_status_token(ref.status) << '\n';
    }
  }
}

nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows, bool with_ref) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j = row.metrics.to_json();
    if (with_ref) {
      nlohmann::ordered_json refs = nlohmann::ordered_json::array();
      for (const auto& ref : row.refs) {
        nlohmann::ordered_json r;
        r["source_eq"] = ref.source_eq;
        r["metric"] = ref.metric;
        r["closed_value"] = ref.closed_value;
        r["generic_value"] = ref.generic_value;
        r["delta"] = ref.abs_delta;
        r["status"] = ref_status_token(ref.status);
        refs.push_back(std::move(r));
      }
      j["refs"] = std::move(refs);
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::function<double(double)> generic_metric_fn(Family f, BellKind bell,
                                                const std::string& metric) {
  return [f, bell, metric](double p) {
    const Matrix4 rho = materialize(StateFamily{f, bell, p}).matrix();
    if (metric == "C") return concurrence(rho);
    if (metric == "f") return teleport_fidelity(rho);
    if (metric == "L") return linear_entropy(rho);
    if (metric == "M") return bell_chsh_m(rho);
    if (metric == "N") return n_value(rho);
    throw std::invalid_argument("unknown metric '" + metric + "'");
  };
}

ThresholdResult find_threshold(const std::function<double(double)>& fn, double threshold,
                               double lo, double hi, double tol) {
  ThresholdResult res;
  res.lo = lo;
  res.hi = hi;
  res.tol = tol;
  res.f_lo = fn(lo);
  res.f_hi = fn(hi);
  const bool p_lo = res.f_lo > threshold;
  const bool p_hi = res.f_hi > threshold;
  if (p_lo == p_hi) {
    std::ostringstream msg;
    msg << "find_threshold: no sign change of (value > " << threshold << ") on [" << lo << ", "
        << hi << "]; endpoint values " << res.f_lo << " and " << res.f_hi;
    throw std::runtime_error(msg.str());
  }
  double a = lo, b = hi;
  int iters = 0;
  while (b - a > 2.0 * tol && iters < 200) {
    const double mid = 0.5 * (a + b);
    const bool p_mid = fn(mid) > threshold;
    if (p_mid == p_lo) a = mid;
    else b = mid;
    ++iters;
  }
  res.root = 0.5 * (a + b);
  res.iterations = iters;
  return res;
}

std::vector<double> scan_roots(const std::function<double(double)>& fn, double threshold,
                               double lo, double hi, double scan_step, double tol) {
  std::vector<double> roots;
  const long n = std::lround((hi - lo) / scan_step);
  bool prev = fn(lo) > threshold;
  double prev_x = lo;
  for (long i = 1; i <= n; ++i) {
    const double x = std::min(hi, lo + scan_step * static_cast<double>(i));
    const bool cur = fn(x) > threshold;
    if (cur != prev) {
      roots.push_back(find_threshold(fn, threshold, prev_x, x, tol).root);
    }
    prev = cur;
    prev_x = x;
  }
  return roots;
}

std::vector<ThresholdClaim> builtin_threshold_claims() {
  return {
      {"rho1-phi+-bell-low", Family::Rho1, BellKind::PhiPlus, "M", 1.0, 0.45,
       "rho1:phi+ violates Bell-CHSH up to ~0.45"},
      {"rho1-phi+-bell-high", Family::Rho1, BellKind::PhiPlus, "M", 1.0, 0.89,
       "rho1:phi+ violates Bell-CHSH again from ~0.89"},
      {"rho2-psi--bell-low", Family::Rho2, BellKind::PsiMinus, "M", 1.0, 0.37,
       "rho2:psi- violates Bell-CHSH up to ~0.37"},
      {"rho2-psi--bell-high", Family::Rho2, BellKind::PsiMinus, "M", 1.0, 0.91,
       "rho2:psi- violates Bell-CHSH again from ~0.91"},
      {"rho2-psi--fid-low", Family::Rho2, BellKind::PsiMinus, "f", 2.0 / 3.0, 0.50,
       "rho2:psi- fidelity stays above 2/3 up to 0.5"},
      {"rho2-psi--fid-high", Family::Rho2, BellKind::PsiMinus, "f", 2.0 / 3.0, 0.75,
       "rho2:psi- fidelity exceeds 2/3 again from 0.75"},
      {"rho6-psi--conc-onset", Family::Rho6, BellKind::PsiMinus, "C", 1e-9, 0.75,
       "rho6:psi- becomes entangled at 0.75"},
      {"rho5-phi+-bell", Family::Rho5, BellKind::PhiPlus, "M", 1.0, 0.38,
       "rho5:phi+ violates Bell-CHSH up to ~0.38"},
      {"rho5-phi--bell", Family::Rho5, BellKind::PhiMinus, "M", 1.0, 0.32,
       "rho5:phi- violates Bell-CHSH up to ~0.32"},
      {"tau1-phi--fid-low", Family::Tau1, BellKind::PhiMinus, "f", 2.0 / 3.0, 0.314,
       "tau1:phi- fidelity stays above 2/3 up to ~0.314"},
      {"tau1-phi--fid-high", Family::Tau1, BellKind::PhiMinus, "f", 2.0 / 3.0, 0.43,
       "tau1:phi- fidelity exceeds 2/3 again from ~0.43"},
  };
}

ClaimResult evaluate_claim(const ThresholdClaim& claim, double tol, double accept_window) {
  ClaimResult out;
  out.claim = claim;

  const auto ref = reference_metric_fn(claim.family, claim.bell, claim.metric);
  if (ref) {
    RouteRoots rr;
    rr.route = "reference";
    rr.roots = scan_roots(*ref, claim.threshold, 0.0, 1.0, 1e-3, tol);
    out.routes.push_back(std::move(rr));
  }
  {
    RouteRoots rr;
    rr.route = "engine";
    rr.roots = scan_roots(generic_metric_fn(claim.family, claim.bell, claim.metric),
                          claim.threshold, 0.0, 1.0, 1e-3, tol);
    out.routes.push_back(std::move(rr));
  }

  for (const auto& rr : out.routes) {
    for (double root : rr.roots) {
      if (std::abs(root - claim.claimed) <= accept_window) {
        if (!out.reproduced) {
          out.reproduced = true;
          out.reproduced_by = rr.route;
          out.matched_root = root;
        }
      }
    }
  }
  if (!out.reproduced) {
    std::ostringstream note;
    note << "claimed boundary " << claim.claimed << " not located within " << accept_window
         << " by any route;";
    for (const auto& rr : out.routes) {
      note << " " << rr.route << ":";
      if (rr.roots.empty()) note << " no crossing";
      for (double r : rr.roots) note << " " << r;
      note << ";";
    }
    out.note = note.str();
  }
  return out;
}

std::vector<ClaimResult> run_threshold_claims(double tol, double accept_window) {
  std::vector<ClaimResult> out;
  for (const auto& claim : builtin_threshold_claims()) {
    out.push_back(evaluate_claim(claim, tol, accept_window));
  }
  return out;
}

nlohmann::ordered_json claims_json(const std::vector<ClaimResult>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& res : results) {
    nlohmann::ordered_json j;
    j["id"] = res.claim.id;
    j["family"] = family_token(res.claim.family);
    j["bell"] = bell_token(res.claim.bell);
    j["metric"] = res.claim.metric;
    j["threshold"] = res.claim.threshold;
    j["claimed"] = res.claim.claimed;
    j["description"] = res.claim.description;
    j["status"] = res.reproduced ? "reproduced" : "catalogued";
    if (res.reproduced) {
      j["reproduced_by"] = res.reproduced_by;
      j["root"] = *res.matched_root;
      j["delta"] = std::abs(*res.matched_root - res.claim.claimed);
    } else {
      j["note"] = res.note;
    }
    for (const auto& rr : res.routes) j["roots"][rr.route] = rr.roots;
    arr.push_back(std::move(j));
  }
  return arr;
}

const std::array<std::string, Table1::kCols>& Table1::column_names() {
  static const std::array<std::string, kCols> names{"rho1:phi+", "rho2:psi+", "rho2:psi-",
                                                    "rhog"};
  return names;
}

Table1 table1() {
  Table1 t;
  const std::array<FamilyVariant, 4> cols{{{Family::Rho1, BellKind::PhiPlus},
                                           {Family::Rho2, BellKind::PsiPlus},
                                           {Family::Rho2, BellKind::PsiMinus},
                                           {Family::RhoG, BellKind::PhiPlus}}};
  for (int i = 0; i < Table1::kRows; ++i) {
    const double p = 0.1 * i;
    t.params[static_cast<size_t>(i)] = p;
    for (int c = 0; c < Table1::kCols; ++c) {
      const auto& v = cols[static_cast<size_t>(c)];
      const double f = teleport_fidelity(materialize(StateFamily{v.family, v.bell, p}).matrix());
      t.raw[static_cast<size_t>(i)][static_cast<size_t>(c)] = f;
      t.cents[static_cast<size_t>(i)][static_cast<size_t>(c)] = round_cents(f);
    }
  }
  return t;
}

std::string table1_pretty(const Table1& t) {
  std::ostringstream os;
  os << "  p     ";
  for (const auto& name : Table1::column_names()) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%-11s", name.c_str());
    os << buf;
  }
  os << '\n';
  for (int i = 0; i < Table1::kRows; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "  %.1f   ", t.params[static_cast<size_t>(i)]);
    os << buf;
    for (int c = 0; c < Table1::kCols; ++c) {
      std::snprintf(buf, sizeof(buf), "%-11.2f",
                    static_cast<double>(t.cents[static_cast<size_t>(i)][static_cast<size_t>(c)]) /
                        100.0);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

void write_table1_csv(std::ostream& os, const Table1& t) {
  os << "p";
  for (const auto& name : Table1::column_names()) os << ',' << name << ',' << name << "_raw";
  os << '\n';
  for (int i = 0; i < Table1::kRows; ++i) {
    os << format_full(t.params[static_cast<size_t>(i)]);
    for (int c = 0; c < Table1::kCols; ++c) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.2f",
                    static_cast<double>(t.cents[static_cast<size_t>(i)][static_cast<size_t>(c)]) /
                        100.0);
      os << ',' << buf << ',' << format_full(t.raw[static_cast<size_t>(i)][static_cast<size_t>(c)]);
    }
    os << '\n';
  }
}

nlohmann::ordered_json table1_json(const Table1& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < Table1::kRows; ++i) {
    nlohmann::ordered_json row;
    row["p"] = t.params[static_cast<size_t>(i)];
    for (int c = 0; c < Table1::kCols; ++c) {
      const auto& name = Table1::column_names()[static_cast<size_t>(c)];
      row[name] = static_cast<double>(t.cents[static_cast<size_t>(i)][static_cast<size_t>(c)]) / 100.0;
      row[name + "_raw"] = t.raw[static_cast<size_t>(i)][static_cast<size_t>(c)];
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

namespace {

double fam_f(Family f, BellKind b, double p) {
  return teleport_fidelity(materialize(StateFamily{f, b, p}).matrix());
}

}  // namespace

FigureData figure_data(int id, double step) {
  FigureData fig;
  fig.id = id;
  const auto ref_f = [](Family f, BellKind b, double p) {
    const auto fn = reference_metric_fn(f, b, "f");
    return (*fn)(p);
  };
  auto grid = [&](double lo, double hi) {
    std::vector<double> g;
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) g.push_back(std::min(hi, lo + step * static_cast<double>(i)));
    return g;
  };
  switch (id) {
    case 1: {
      fig.name = "fidelity-x-mixtures-vs-ghz";
      fig.columns = {"p", "f_rho1_phi_plus", "f_rho2_psi_plus", "f_rho2_psi_minus", "f_rhog"};
      for (double p : grid(0.0, 1.0)) {
        fig.rows.push_back({p, fam_f(Family::Rho1, BellKind::PhiPlus, p),
                            fam_f(Family::Rho2, BellKind::PsiPlus, p),
                            fam_f(Family::Rho2, BellKind::PsiMinus, p),
                            fam_f(Family::RhoG, BellKind::PhiPlus, p)});
      }
      break;
    }
    case 2: {
      fig.name = "fidelity-nonx-mixtures-vs-mems";
      fig.columns = {"p",
                     "f_mems_w",
                     "f_rho5_phi_plus",
                     "f_rho5_phi_minus",
                     "f_rho6_psi_plus",
                     "f_rho6_psi_minus"};
      for (double p : grid(0.0, 1.0)) {
        fig.rows.push_back({p, fam_f(Family::MemsW, BellKind::PhiPlus, p),
                            fam_f(Family::Rho5, BellKind::PhiPlus, p),
                            fam_f(Family::Rho5, BellKind::PhiMinus, p),
                            fam_f(Family::Rho6, BellKind::PsiPlus, p),
                            fam_f(Family::Rho6, BellKind::PsiMinus, p)});
      }
      break;
    }
    case 3: {
      fig.name = "fidelity-subclasses-a-and-b";
      fig.columns = {"p",
                     "f_tau1_phi_plus",
                     "f_tau1_phi_plus_ref",
                     "f_tau1_phi_minus",
                     "f_tau1_phi_minus_ref",
                     "f_rho1_phi_plus",
                     "f_rho6_psi_plus",
                     "f_rho6_psi_minus",
                     "in_display_window"};
      fig.note = "display window 0 <= p <= 0.45; the dataset covers [0, 1]";
      for (double p : grid(0.0, 1.0)) {
        fig.rows.push_back({p, fam_f(Family::Tau1, BellKind::PhiPlus, p),
                            ref_f(Family::Tau1, BellKind::PhiPlus, p),
                            fam_f(Family::Tau1, BellKind::PhiMinus, p),
                            ref_f(Family::Tau1, BellKind::PhiMinus, p),
                            fam_f(Family::Rho1, BellKind::PhiPlus, p),
                            fam_f(Family::Rho6, BellKind::PsiPlus, p),
                            fam_f(Family::Rho6, BellKind::PsiMinus, p),
                            p <= 0.45 ? 1.0 : 0.0});
      }
      break;
    }
    case 4: {
      fig.name = "fidelity-star-mixtures-vs-werner";
      fig.columns = {"p",
                     "f_tau1_phi_plus",
                     "f_tau1_phi_plus_ref",
                     "f_tau1_phi_minus",
                     "f_tau1_phi_minus_ref",
                     "f_werner"};
      for (double p : grid(0.5, 1.0)) {
        fig.rows.push_back({p, fam_f(Family::Tau1, BellKind::PhiPlus, p),
                            ref_f(Family::Tau1, BellKind::PhiPlus, p),
                            fam_f(Family::Tau1, BellKind::PhiMinus, p),
                            ref_f(Family::Tau1, BellKind::PhiMinus, p),
                            fam_f(Family::Werner, BellKind::PhiPlus, p)});
      }
      break;
    }
    default: throw std::invalid_argument("figure_data: id must be 1..4");
  }
  return fig;
}

void write_figure_csv(std::ostream& os, const FigureData& fig) {
  if (!fig.note.empty()) os << "# " << fig.note << '\n';
  for (size_t i = 0; i < fig.columns.size(); ++i) {
    os << fig.columns[i] << (i + 1 < fig.columns.size() ? "," : "");
  }
  os << '\n';
  for (const auto& row : fig.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      os << format_full(row[i]) << (i + 1 < row.size() ? "," : "");
    }
    os << '\n';
  }
}

}  // namespace qtele
