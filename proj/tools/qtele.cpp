#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtele/metrics.hpp"
#include "qtele/reference_formulas.hpp"
#include "qtele/states.hpp"
#include "qtele/sweep.hpp"
#include "qtele/teleport.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("QTELE_OUT_DIR")) {
    return std::filesystem::path(dir) / p;
  }
  return p;
}

qtele::StateFamily parse_family_or_throw(const std::string& selector, double param) {
  if (!(param >= 0.0 && param <= 1.0)) {
    std::ostringstream msg;
    msg << "parameter " << param << " out of range [0,1]";
    throw UsageError(msg.str());
  }
  const qtele::SelectorParse parsed = qtele::parse_selector(selector, param);
  if (!parsed.value) throw UsageError(parsed.error);
  return *parsed.value;
}

qtele::Matrix4 read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("unreadable matrix file '" + path + "'");
  qtele::Matrix4 m;
  for (int r = 0; r < 4; ++r) {
    std::string line;
    do {
      if (!std::getline(in, line)) {
        throw UsageError("matrix file '" + path + "' ended before row " + std::to_string(r + 1));
      }
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream ls(line);
    for (int c = 0; c < 4; ++c) {
      std::string tok;
      if (!(ls >> tok)) {
        throw UsageError("matrix file '" + path + "': row " + std::to_string(r + 1) +
                         " has fewer than 4 entries");
      }
      double re = 0, im = 0;
      char comma = 0;
      std::istringstream ts(tok);
      if (!(ts >> re >> comma >> im) || comma != ',') {
        throw UsageError("matrix file '" + path + "': bad entry '" + tok +
                         "' (expected re,im)");
      }
      m(r, c) = qtele::Complex(re, im);
    }
  }
  return m;
}

qtele::DensityMatrix validated_or_throw(const qtele::Matrix4& m) {
  const qtele::DensityCheck check = qtele::validate_density(m);
  if (!check.ok()) {
    std::ostringstream msg;
    msg << "matrix fails density checks:";
    for (const auto& v : check.violations) msg << "\n  " << qtele::describe(v);
    throw ValidationError(msg.str());
  }
  return *check.state;
}

std::vector<qtele::FamilyVariant> parse_family_list(const std::string& list) {
  std::vector<qtele::FamilyVariant> out;
  std::istringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "all") {
      const auto all = qtele::all_family_variants();
      out.insert(out.end(), all.begin(), all.end());
      continue;
    }
    const auto fam = parse_family_or_throw(tok, 0.0);
    out.push_back({fam.family, fam.bell});
  }
  if (out.empty()) throw UsageError("no families given");
  return out;
}

void print_metrics_pretty(const qtele::MetricsReport& rep,
                          const std::vector<qtele::ClosedFormReport>& refs) {
  std::cout << "state     " << rep.family;
  if (!rep.bell.empty()) std::cout << ":" << rep.bell;
  std::cout << "  param " << rep.param << "\n";
  const auto line = [](const char* k, double v) {
    std::printf("  %-18s %.10f\n", k, v);
  };
  line("concurrence C", rep.concurrence);
  line("fidelity f", rep.fidelity);
  line("N value", rep.n_value);
  line("linear entropy L", rep.linear_entropy);
  line("Bell-CHSH M", rep.m_value);
  std::cout << "  X shaped           " << (rep.is_x ? "yes" : "no") << "\n";
  std::cout << "  useful (N > 1)     " << (rep.useful_for_teleport ? "yes" : "no") << "\n";
  std::cout << "  violates Bell      " << (rep.violates_bell ? "yes" : "no") << "\n";
  if (!refs.empty()) {
    std::cout << "  closed-form cross-checks:\n";
    for (const auto& r : refs) {
      std::printf("    %-22s %-3s closed %.10f engine %.10f delta %.3e  %s\n",
                  r.source_eq.c_str(), r.metric.c_str(), r.closed_value, r.generic_value,
                  r.abs_delta, qtele::ref_status_token(r.status).c_str());
    }
  }
}

int cmd_metrics(const std::string& selector, double param, const std::string& matrix_file,
                const std::string& format) {
  qtele::MetricsReport rep;
  std::vector<qtele::ClosedFormReport> refs;
  if (!matrix_file.empty()) {
    const qtele::Matrix4 m = read_matrix_file(matrix_file);
    const qtele::DensityMatrix rho = validated_or_throw(m);
    rep = qtele::MetricsReport::evaluate("file", "", param, qtele::Matrix4(rho.matrix()));
  } else {
    const qtele::StateFamily fam = parse_family_or_throw(selector, param);
    rep = qtele::MetricsReport::evaluate(fam, qtele::materialize(fam));
    refs = qtele::family_closed_forms(fam);
  }
  if (format == "json") {
    std::cout << rep.to_json().dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << qtele::MetricsReport::csv_header() << "\n" << rep.csv_row() << "\n";
  } else {
    print_metrics_pretty(rep, refs);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& families, double start, double stop, double step, bool with_ref,
              const std::string& out, const std::string& json_out) {
  qtele::SweepConfig cfg;
  cfg.families = parse_family_list(families);
  cfg.start = start;
  cfg.stop = stop;
  cfg.step = step;
  cfg.with_ref = with_ref;
  const auto rows = qtele::sweep(cfg);
  if (!out.empty()) {
    const auto path = resolve_out(out);
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open output file '" + path.string() + "'");
    qtele::write_sweep_csv(os, rows, with_ref);
    std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
  } else {
    qtele::write_sweep_csv(std::cout, rows, with_ref);
  }
  if (!json_out.empty()) {
    const auto path = resolve_out(json_out);
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open output file '" + path.string() + "'");
    os << qtele::sweep_json(rows, with_ref).dump(2) << "\n";
    std::cout << "wrote JSON mirror to " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_thresholds(const std::string& format, const std::string& family,
                   const std::string& metric, double threshold, double lo, double hi, double tol) {
  if (!family.empty()) {
    const qtele::StateFamily fam = parse_family_or_throw(family, 0.0);
    const auto fn = qtele::generic_metric_fn(fam.family, fam.bell, metric);
    const auto res = qtele::find_threshold(fn, threshold, lo, hi, tol);
    std::printf("engine boundary of %s %s > %g: root %.9f (bracket [%g, %g], %d iterations)\n",
                family.c_str(), metric.c_str(), threshold, res.root, res.lo, res.hi,
                res.iterations);
    return kExitOk;
  }
  const auto results = qtele::run_threshold_claims(tol);
  if (format == "json") {
    std::cout << qtele::claims_json(results).dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& r : results) {
    std::printf("%-22s claimed %-6.3f %-10s", r.claim.id.c_str(), r.claim.claimed,
                r.reproduced ? "reproduced" : "catalogued");
    if (r.reproduced) {
      std::printf(" via %-9s root %.6f (delta %.4f)\n", r.reproduced_by.c_str(), *r.matched_root,
                  std::abs(*r.matched_root - r.claim.claimed));
    } else {
      std::printf(" %s\n", r.note.c_str());
    }
  }
  return kExitOk;
}

int cmd_table1(const std::string& format, const std::string& out) {
  const qtele::Table1 t = qtele::table1();
  if (format == "json") {
    std::cout << qtele::table1_json(t).dump(2) << "\n";
  } else if (format == "csv" || !out.empty()) {
    if (!out.empty()) {
      const auto path = resolve_out(out);
      std::ofstream os(path);
      if (!os) throw UsageError("cannot open output file '" + path.string() + "'");
      qtele::write_table1_csv(os, t);
      std::cout << "wrote " << path.string() << "\n";
    } else {
      qtele::write_table1_csv(std::cout, t);
    }
  } else {
    std::cout << qtele::table1_pretty(t);
  }
  return kExitOk;
}

int cmd_figures(int id, double step, const std::string& out_dir) {
  std::vector<int> ids;
  if (id == 0) ids = {1, 2, 3, 4};
  else if (id >= 1 && id <= 4) ids = {id};
  else throw UsageError("figure id must be 1..4");
  for (int fid : ids) {
    const qtele::FigureData fig = qtele::figure_data(fid, step);
    std::ostringstream name;
    name << "fig" << fid << "_" << fig.name << ".csv";
    const auto path = resolve_out(
        out_dir.empty() ? name.str() : (std::filesystem::path(out_dir) / name.str()).string());
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open output file '" + path.string() + "'");
    qtele::write_figure_csv(os, fig);
    std::cout << "wrote " << path.string() << " (" << fig.rows.size() << " rows)\n";
  }
  return kExitOk;
}

int cmd_simulate(const std::string& selector, double param, const std::string& matrix_file,
                 long samples, std::uint64_t seed, int shards, bool align,
                 const std::string& format) {
  qtele::TeleportRun tr;
  if (!matrix_file.empty()) {
    tr.channel = read_matrix_file(matrix_file);
    validated_or_throw(tr.channel);
  } else {
    const qtele::StateFamily fam = parse_family_or_throw(selector, param);
    tr.channel = qtele::materialize(fam).matrix();
  }
  tr.samples = samples;
  tr.seed = seed;
  tr.shards = shards;
  if (align) tr.pre_rotation = qtele::singlet_alignment_rotation();
  const qtele::SimResult res = qtele::run(tr);
  if (format != "json") {
    std::printf("mean fidelity %.6f +- %.6f (%ld samples, seed %llu, rng %s%s)\n",
                res.mean_fidelity, res.std_error, res.samples,
                static_cast<unsigned long long>(res.seed), res.rng_name.c_str(),
                align ? ", singlet-aligned channel" : "");
  }
  std::cout << res.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& selector, double param, const std::string& matrix_file,
                 bool all, int grid) {
  if (!matrix_file.empty()) {
    const qtele::Matrix4 m = read_matrix_file(matrix_file);
    validated_or_throw(m);
    std::cout << "matrix file passes density checks\n";
    return kExitOk;
  }
  if (all) {
    long checked = 0;
    for (const auto& v : qtele::all_family_variants()) {
      for (int i = 0; i < grid; ++i) {
        const double p = static_cast<double>(i) / (grid - 1);
        qtele::materialize(qtele::StateFamily{v.family, v.bell, p});  // throws when invalid
        ++checked;
      }
    }
    std::cout << "validated " << checked << " states across " << qtele::all_family_variants().size()
              << " families\n";
    return kExitOk;
  }
  const qtele::StateFamily fam = parse_family_or_throw(selector, param);
  qtele::materialize(fam);
  std::cout << qtele::selector_string(fam) << " at param " << param
            << " passes density checks\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit mixed-state teleportation channel toolkit"};
  app.require_subcommand(1);

  std::string selector = "werner";
  double param = 0.0;
  std::string matrix_file;
  std::string format = "pretty";
  std::string families = "all";
  double start = 0.0, stop = 1.0, step = 0.001;
  bool with_ref = false;
  std::string out, json_out, out_dir;
  std::string custom_family;
  std::string metric = "M";
  double threshold = 1.0, lo = 0.0, hi = 1.0, tol = 1e-6;
  int fig_id = 0;
  long samples = 10000;
  std::uint64_t seed = 1;
  int shards = 1;
  bool align = false;
  bool all = false;
  int grid = 101;

  auto* metrics = app.add_subcommand("metrics", "metrics of one state");
  metrics->add_option("selector", selector, "family selector, e.g. rho1:phi+ or werner");
  metrics->add_option("--p", param, "family parameter in [0,1]");
  metrics->add_option("--matrix-file", matrix_file, "4x4 matrix file (re,im pairs, row-major)");
  metrics->add_option("--format", format)->check(CLI::IsMember({"pretty", "json", "csv"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over families");
  sweep_cmd->add_option("--families", families, "comma list of selectors or 'all'");
  sweep_cmd->add_option("--start", start);
  sweep_cmd->add_option("--stop", stop);
  sweep_cmd->add_option("--step", step);
  sweep_cmd->add_flag("--with-ref", with_ref, "append closed-form cross-check columns");
  sweep_cmd->add_option("--out", out, "CSV output path");
  sweep_cmd->add_option("--json", json_out, "JSON mirror output path");

  auto* thresholds = app.add_subcommand("thresholds", "boundary claims catalog");
  thresholds->add_option("--format", format)->check(CLI::IsMember({"pretty", "json"}));
  thresholds->add_option("--family", custom_family, "custom: family selector");
  thresholds->add_option("--metric", metric, "custom: C, f, L, M or N");
  thresholds->add_option("--threshold", threshold, "custom: predicate value");
  thresholds->add_option("--lo", lo);
  thresholds->add_option("--hi", hi);
  thresholds->add_option("--tol", tol);

  auto* table = app.add_subcommand("table1", "fidelity summary table");
  table->add_option("--format", format)->check(CLI::IsMember({"pretty", "json", "csv"}));
  table->add_option("--out", out, "CSV output path");

  auto* figures = app.add_subcommand("figures", "figure datasets");
  figures->add_option("--id", fig_id, "figure id 1..4 (default: all)");
  figures->add_option("--step", step);
  figures->add_option("--out-dir", out_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo teleportation");
  simulate->add_option("selector", selector, "family selector");
  simulate->add_option("--p", param, "family parameter in [0,1]");
  simulate->add_option("--matrix-file", matrix_file, "channel matrix file");
  simulate->add_option("--samples", samples)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed);
  simulate->add_option("--shards", shards)->check(CLI::PositiveNumber);
  simulate->add_flag("--align-singlet", align,
                     "rotate the channel's singlet component onto phi+ before the protocol");
  simulate->add_option("--format", format)->check(CLI::IsMember({"pretty", "json"}));

  auto* validate = app.add_subcommand("validate", "density-matrix validation");
  validate->add_option("selector", selector, "family selector");
  validate->add_option("--p", param, "family parameter in [0,1]");
  validate->add_option("--matrix-file", matrix_file, "matrix file to validate");
  validate->add_flag("--all", all, "validate every family on a grid");
  validate->add_option("--grid", grid, "grid points for --all")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (metrics->parsed()) return cmd_metrics(selector, param, matrix_file, format);
    if (sweep_cmd->parsed()) return cmd_sweep(families, start, stop, step, with_ref, out, json_out);
    if (thresholds->parsed())
      return cmd_thresholds(format, custom_family, metric, threshold, lo, hi, tol);
    if (table->parsed()) return cmd_table1(format, out);
    if (figures->parsed()) return cmd_figures(fig_id, step, out_dir);
    if (simulate->parsed())
      return cmd_simulate(selector, param, matrix_file, samples, seed, shards, align, format);
    if (validate->parsed()) return cmd_validate(selector, param, matrix_file, all, grid);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
