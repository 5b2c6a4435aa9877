#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtele/density.hpp"
#include "qtele/linalg.hpp"

namespace qtele {

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

enum class TripartiteKind { W, Wbar, WWbar, Star, Ghz };

enum class Family {
  Rho1,
  Rho2,
  Rho3,
  Rho4,
  Rho5,
  Rho6,
  Tau1,
  Tau2,
  RhoG,
  Werner,
  MemsW,
  MemsWbar,
};

/// phi+/- = (|00> +- |11>)/sqrt(2), psi+/- = (|01> +- |10>)/sqrt(2).
Vector4 bell_state(BellKind kind);
Matrix4 bell_projector(BellKind kind);

/// Three-qubit kets in the big-endian basis |q0 q1 q2>:
///   W    = (|001> + |010> + |100>)/sqrt(3)
///   Wbar = (|110> + |101> + |011>)/sqrt(3)
///   WWbar = (W + Wbar)/sqrt(2)
///   Star = (|000> + |100> + |101> + |111>)/2
///   Ghz  = (|000> + |111>)/sqrt(2)
Vector8 tripartite_state(TripartiteKind kind);

struct ReducedPair {
  Matrix4 rho;
  /// Set when the Star state's central qubit (index 2) was traced; the
  /// remaining pair is separable by construction and no mixture family is
  /// built from it.
  bool separable_by_construction = false;
};

ReducedPair reduced_pair(TripartiteKind kind, int traced_qubit);

/// One point of a parameterized mixture family. `bell` is ignored by
/// RhoG/Werner/MemsW/MemsWbar.
struct StateFamily {
  Family family = Family::Rho1;
  BellKind bell = BellKind::PhiPlus;
  double param = 0.0;
};

/// Families built on phi mixtures accept PhiPlus/PhiMinus, psi mixtures
/// PsiPlus/PsiMinus; the fixed-state families accept no flavor at all.
bool family_uses_bell(Family f);
bool family_accepts(Family f, BellKind bell);

/// Convex mixture (or the Werner combination) materialized from first
/// principles: partial trace of the tripartite projector plus the Bell
/// projector. Throws std::invalid_argument for an out-of-range parameter or
/// an invalid family/flavor pairing.
DensityMatrix materialize(const StateFamily& fam);

/// True when every entry off both the main and the anti-diagonal has
/// modulus <= tol.
bool is_x_state(const Matrix& rho, double tol = 1e-10);

std::string family_token(Family f);
std::string bell_token(BellKind b);
std::string selector_string(const StateFamily& fam);

/// Parses "rho1:phi+", "werner", "tau2:psi-" ... The flavor defaults to the
/// family's "+" variant when omitted. Returns std::nullopt plus a message on
/// failure.
struct SelectorParse {
  std::optional<StateFamily> value;
  std::string error;
};
SelectorParse parse_selector(std::string_view selector, double param = 0.0);

struct FamilyVariant {
  Family family;
  BellKind bell;  // meaningful only when family_uses_bell
};

/// All addressable (family, flavor) combinations, in a fixed order.
std::vector<FamilyVariant> all_family_variants();

}  // namespace qtele
