#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "qtele/density.hpp"
#include "qtele/states.hpp"

namespace qtele {

/// xoshiro256++ seeded through splitmix64; normals by Box-Muller. Fully
/// deterministic across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();  // in [0, 1)
  double normal();

  static constexpr const char* kName = "xoshiro256++/splitmix64/box-muller";

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Unit vector uniform on the Bloch sphere: four standard normals as the
/// real/imaginary components, then normalized.
Vector2 haar_random_qubit(Rng& rng);

/// Standard teleportation of `input` through the two-qubit channel state:
/// project qubits (0,1) of input (x) channel onto each Bell state, apply the
/// outcome's Pauli correction (phi+ -> I, phi- -> Z, psi+ -> X, psi- -> Y) to
/// qubit 2 and average the output fidelity over outcomes weighted by their
/// probabilities. Outcomes with probability below 1e-14 contribute zero.
double teleport_once(const Matrix4& channel, const Vector2& input);

/// Per-outcome diagnostics variant.
struct TeleportOutcomeBreakdown {
  double fidelity = 0.0;
  std::array<double, 4> outcome_probability{};
  std::array<double, 4> outcome_fidelity{};
};
TeleportOutcomeBreakdown teleport_once_detailed(const Matrix4& channel, const Vector2& input);

struct TeleportRun {
  Matrix4 channel;
  long samples = 10000;
  std::uint64_t seed = 1;
  int shards = 1;
  /// When false, shards run one after another on the calling thread; the
  /// merged result is identical either way for a given shard plan.
  bool threaded = true;
  /// Local rotation (u1 (x) u2) applied to the channel before the protocol;
  /// both factors must be unitary to 1e-10.
  std::optional<std::pair<Matrix2, Matrix2>> pre_rotation;
};

struct SimResult {
  double mean_fidelity = 0.0;
  double std_error = 0.0;
  std::array<double, 4> per_outcome_fidelity{};
  long samples = 0;
  std::uint64_t seed = 0;
  int shards = 1;
  std::string rng_name = Rng::kName;

  nlohmann::ordered_json to_json() const;
};

/// Monte-Carlo mean and standard error of teleport_once over Haar-random
/// inputs. Samples are split across shards with independent substreams
/// derived from (seed, shard index); the merged result does not depend on
/// whether shards execute concurrently.
SimResult run(const TeleportRun& tr);

/// Rotation aligning the singlet with phi+ on the second qubit: I (x) i sigma_y.
std::pair<Matrix2, Matrix2> singlet_alignment_rotation();

}  // namespace qtele
