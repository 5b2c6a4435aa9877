#include "qtele/states.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtele {

Vector4 bell_state(BellKind kind) {
  const double r = 1.0 / std::sqrt(2.0);
  Vector4 v = Vector4::Zero();
  switch (kind) {
    case BellKind::PhiPlus:
      v(0) = r;
      v(3) = r;
      break;
    case BellKind::PhiMinus:
      v(0) = r;
      v(3) = -r;
      break;
    case BellKind::PsiPlus:
      v(1) = r;
      v(2) = r;
      break;
    case BellKind::PsiMinus:
      v(1) = r;
      v(2) = -r;
      break;
  }
  return v;
}

Matrix4 bell_projector(BellKind kind) {
  const Vector4 v = bell_state(kind);
  return v * v.adjoint();
}

Vector8 tripartite_state(TripartiteKind kind) {
  Vector8 v = Vector8::Zero();
  switch (kind) {
    case TripartiteKind::W: {
      const double r = 1.0 / std::sqrt(3.0);
      v(1) = r;  // |001>
      v(2) = r;  // |010>
      v(4) = r;  // |100>
      break;
    }
    case TripartiteKind::Wbar: {
      const double r = 1.0 / std::sqrt(3.0);
      v(6) = r;  // |110>
      v(5) = r;  // |101>
      v(3) = r;  // |011>
      break;
    }
    case TripartiteKind::WWbar: {
      const double r = 1.0 / std::sqrt(6.0);
      for (int i = 1; i <= 6; ++i) v(i) = r;
      break;
    }
    case TripartiteKind::Star: {
      v(0) = 0.5;  // |000>
      v(4) = 0.5;  // |100>
      v(5) = 0.5;  // |101>
      v(7) = 0.5;  // |111>
      break;
    }
    case TripartiteKind::Ghz: {
      const double r = 1.0 / std::sqrt(2.0);
      v(0) = r;
      v(7) = r;
      break;
    }
  }
  return v;
}

ReducedPair reduced_pair(TripartiteKind kind, int traced_qubit) {
  const Vector8 psi = tripartite_state(kind);
  const Matrix rho8 = psi * psi.adjoint();
  ReducedPair out;
  out.rho = partial_trace(rho8, traced_qubit);
  out.separable_by_construction = (kind == TripartiteKind::Star && traced_qubit == 2);
  return out;
}

bool family_uses_bell(Family f) {
  switch (f) {
    case Family::RhoG:
    case Family::Werner:
    case Family::MemsW:
    case Family::MemsWbar: return false;
    default: return true;
  }
}

bool family_accepts(Family f, BellKind bell) {
  const bool phi = (bell == BellKind::PhiPlus || bell == BellKind::PhiMinus);
  switch (f) {
    case Family::Rho1:
    case Family::Rho3:
    case Family::Rho5:
    case Family::Tau1: return phi;
    case Family::Rho2:
    case Family::Rho4:
    case Family::Rho6:
    case Family::Tau2: return !phi;
    default: return true;  // flavor ignored
  }
}

namespace {

Matrix4 mems_w() { return reduced_pair(TripartiteKind::W, 2).rho; }
Matrix4 mems_wbar() { return reduced_pair(TripartiteKind::Wbar, 2).rho; }
Matrix4 reduced_wwbar() { return reduced_pair(TripartiteKind::WWbar, 2).rho; }
Matrix4 reduced_star() { return reduced_pair(TripartiteKind::Star, 0).rho; }
Matrix4 reduced_ghz() { return reduced_pair(TripartiteKind::Ghz, 2).rho; }

Matrix4 convex(double p, const Matrix4& mixed, const Matrix4& bell) {
  return p * mixed + (1.0 - p) * bell;
}

}  // namespace

DensityMatrix materialize(const StateFamily& fam) {
  if (!(fam.param >= 0.0 && fam.param <= 1.0)) {
    std::ostringstream msg;
    msg << "family parameter " << fam.param << " outside [0,1]";
    throw std::invalid_argument(msg.str());
  }
  if (family_uses_bell(fam.family) && !family_accepts(fam.family, fam.bell)) {
    throw std::invalid_argument("family " + family_token(fam.family) + " does not take flavor " +
                                bell_token(fam.bell));
  }
  const double p = fam.param;
  Matrix4 rho;
  switch (fam.family) {
    case Family::Rho1: rho = convex(p, mems_w(), bell_projector(fam.bell)); break;
    case Family::Rho2: rho = convex(p, mems_w(), bell_projector(fam.bell)); break;
    case Family::Rho3: rho = convex(p, mems_wbar(), bell_projector(fam.bell)); break;
    case Family::Rho4: rho = convex(p, mems_wbar(), bell_projector(fam.bell)); break;
    case Family::Rho5: rho = convex(p, reduced_wwbar(), bell_projector(fam.bell)); break;
    case Family::Rho6: rho = convex(p, reduced_wwbar(), bell_projector(fam.bell)); break;
    case Family::Tau1: rho = convex(p, reduced_star(), bell_projector(fam.bell)); break;
    case Family::Tau2: rho = convex(p, reduced_star(), bell_projector(fam.bell)); break;
    case Family::RhoG: rho = convex(p, reduced_ghz(), bell_projector(BellKind::PhiPlus)); break;
    case Family::Werner:
      rho = ((1.0 - p) / 3.0) * Matrix4::Identity() +
            ((4.0 * p - 1.0) / 3.0) * bell_projector(BellKind::PsiMinus);
      break;
    case Family::MemsW: rho = mems_w(); break;
    case Family::MemsWbar: rho = mems_wbar(); break;
  }
  DensityCheck check = validate_density(rho);
  if (!check.ok()) {
    std::ostringstream msg;
    msg << "materialized state failed validation:";
    for (const auto& v : check.violations) msg << " " << describe(v) << ";";
    throw std::logic_error(msg.str());
  }
  return *check.state;
}

bool is_x_state(const Matrix& rho, double tol) {
  const Eigen::Index n = rho.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || i + j == n - 1) continue;
      if (std::abs(rho(i, j)) > tol) return false;
    }
  }
  return true;
}

std::string family_token(Family f) {
  switch (f) {
    case Family::Rho1: return "rho1";
    case Family::Rho2: return "rho2";
    case Family::Rho3: return "rho3";
    case Family::Rho4: return "rho4";
    case Family::Rho5: return "rho5";
    case Family::Rho6: return "rho6";
    case Family::Tau1: return "tau1";
    case Family::Tau2: return "tau2";
    case Family::RhoG: return "rhog";
    case Family::Werner: return "werner";
    case Family::MemsW: return "memsw";
    case Family::MemsWbar: return "memswbar";
  }
  return "?";
}

std::string bell_token(BellKind b) {
  switch (b) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
  }
  return "?";
}

std::string selector_string(const StateFamily& fam) {
  if (!family_uses_bell(fam.family)) return family_token(fam.family);
  return family_token(fam.family) + ":" + bell_token(fam.bell);
}

SelectorParse parse_selector(std::string_view selector, double param) {
  SelectorParse out;
  std::string fam_tok{selector};
  std::string bell_tok;
  if (const auto colon = selector.find(':'); colon != std::string_view::npos) {
    fam_tok = std::string(selector.substr(0, colon));
    bell_tok = std::string(selector.substr(colon + 1));
  }
  Family family;
  if (fam_tok == "rho1") family = Family::Rho1;
  else if (fam_tok == "rho2") family = Family::Rho2;
  else if (fam_tok == "rho3") family = Family::Rho3;
  else if (fam_tok == "rho4") family = Family::Rho4;
  else if (fam_tok == "rho5") family = Family::Rho5;
  else if (fam_tok == "rho6") family = Family::Rho6;
  else if (fam_tok == "tau1") family = Family::Tau1;
  else if (fam_tok == "tau2") family = Family::Tau2;
  else if (fam_tok == "rhog") family = Family::RhoG;
  else if (fam_tok == "werner") family = Family::Werner;
  else if (fam_tok == "memsw") family = Family::MemsW;
  else if (fam_tok == "memswbar") family = Family::MemsWbar;
  else {
    out.error = "unknown family '" + fam_tok + "'";
    return out;
  }

  BellKind bell;
  const bool psi_family = (family == Family::Rho2 || family == Family::Rho4 ||
                           family == Family::Rho6 || family == Family::Tau2);
  if (bell_tok.empty()) {
    bell = psi_family ? BellKind::PsiPlus : BellKind::PhiPlus;
  } else if (bell_tok == "phi+") bell = BellKind::PhiPlus;
  else if (bell_tok == "phi-") bell = BellKind::PhiMinus;
  else if (bell_tok == "psi+") bell = BellKind::PsiPlus;
  else if (bell_tok == "psi-") bell = BellKind::PsiMinus;
  else {
    out.error = "unknown flavor '" + bell_tok + "' (expected phi+, phi-, psi+ or psi-)";
    return out;
  }
  if (family_uses_bell(family) && !family_accepts(family, bell)) {
    out.error = "family '" + fam_tok + "' does not take flavor '" + bell_token(bell) + "'";
    return out;
  }
  out.value = StateFamily{family, bell, param};
  return out;
}

std::vector<FamilyVariant> all_family_variants() {
  std::vector<FamilyVariant> out;
  const auto phi_pair = {BellKind::PhiPlus, BellKind::PhiMinus};
  const auto psi_pair = {BellKind::PsiPlus, BellKind::PsiMinus};
  for (Family f : {Family::Rho1, Family::Rho3, Family::Rho5, Family::Tau1})
    for (BellKind b : phi_pair) out.push_back({f, b});
  for (Family f : {Family::Rho2, Family::Rho4, Family::Rho6, Family::Tau2})
    for (BellKind b : psi_pair) out.push_back({f, b});
  for (Family f : {Family::RhoG, Family::Werner, Family::MemsW, Family::MemsWbar})
    out.push_back({f, BellKind::PhiPlus});
  return out;
}

}  // namespace qtele
