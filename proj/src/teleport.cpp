#include "qtele/teleport.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qtele {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector2 haar_random_qubit(Rng& rng) {
  Vector2 v;
  v(0) = Complex(rng.normal(), rng.normal());
  v(1) = Complex(rng.normal(), rng.normal());
  const double n = v.norm();
  if (n < 1e-12) return haar_random_qubit(rng);
  return v / n;
}

namespace {

Matrix2 correction(int outcome) {
  switch (outcome) {
    case 0: return Matrix2::Identity();  // phi+
    case 1: return pauli_z();            // phi-
    case 2: return pauli_x();            // psi+
    default: return pauli_y();           // psi-
  }
}

BellKind outcome_kind(int outcome) {
  switch (outcome) {
    case 0: return BellKind::PhiPlus;
    case 1: return BellKind::PhiMinus;
    case 2: return BellKind::PsiPlus;
    default: return BellKind::PsiMinus;
  }
}

}  // namespace

TeleportOutcomeBreakdown teleport_once_detailed(const Matrix4& channel, const Vector2& input) {
  const Matrix2 input_proj = input * input.adjoint();
  const Matrix total = kron(input_proj, channel);  // qubits: input, Alice, Bob
  TeleportOutcomeBreakdown out;
  for (int k = 0; k < 4; ++k) {
    const Matrix proj = kron(bell_projector(outcome_kind(k)), Matrix2::Identity());
    const Matrix8 filtered = proj * total * proj;
    const double prob = filtered.trace().real();
    out.outcome_probability[static_cast<size_t>(k)] = prob;
    if (prob < 1e-14) continue;  // zero contribution, never a division blowup
    const Matrix2 bob = trace_out_front_pair(filtered) / prob;
    const Matrix2 u = correction(k);
    const Matrix2 corrected = u * bob * u.adjoint();
    const double fid = (input.adjoint() * corrected * input)(0, 0).real();
    out.outcome_fidelity[static_cast<size_t>(k)] = fid;
    out.fidelity += prob * fid;
  }
  return out;
}

double teleport_once(const Matrix4& channel, const Vector2& input) {
  return teleport_once_detailed(channel, input).fidelity;
}

std::pair<Matrix2, Matrix2> singlet_alignment_rotation() {
  Matrix2 u;
  u << 0, 1, -1, 0;  // i sigma_y
  return {Matrix2::Identity(), u};
}

namespace {

// Welford accumulators; the naive sum-of-squares form cancels catastrophically
// when the sample variance is at rounding level (ideal channels).
struct ShardSums {
  double mean = 0.0;
  double m2 = 0.0;
  std::array<double, 4> outcome_sum{};
  long count = 0;
};

ShardSums run_shard(const Matrix4& channel, std::uint64_t seed, std::uint64_t shard_index,
                    long samples) {
  std::uint64_t mix = seed ^ (0x9E3779B97f4A7C15ULL * (shard_index + 1));
  Rng rng(splitmix64(mix));
  ShardSums s;
  for (long i = 0; i < samples; ++i) {
    const Vector2 chi = haar_random_qubit(rng);
    const TeleportOutcomeBreakdown b = teleport_once_detailed(channel, chi);
    ++s.count;
    const double delta = b.fidelity - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    s.m2 += delta * (b.fidelity - s.mean);
    for (size_t k = 0; k < 4; ++k) s.outcome_sum[k] += b.outcome_fidelity[k];
  }
  return s;
}

}  // namespace

SimResult run(const TeleportRun& tr) {
  if (tr.samples < 1) throw std::invalid_argument("run: samples must be >= 1");
  if (tr.shards < 1) throw std::invalid_argument("run: shards must be >= 1");
  Matrix4 channel = tr.channel;
  if (tr.pre_rotation) {
    const auto& [u1, u2] = *tr.pre_rotation;
    const double e1 = (u1 * u1.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff();
    const double e2 = (u2 * u2.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff();
    if (e1 > 1e-10 || e2 > 1e-10) {
      throw std::invalid_argument("run: pre-rotation factors must be unitary to 1e-10");
    }
    const Matrix u = kron(u1, u2);
    channel = u * channel * u.adjoint();
  }

  const int shards = tr.shards;
  std::vector<ShardSums> sums(static_cast<size_t>(shards));
  const long base = tr.samples / shards;
  const long rem = tr.samples % shards;
  auto shard_samples = [&](int i) { return base + (i < rem ? 1 : 0); };

  if (shards == 1) {
    sums[0] = run_shard(channel, tr.seed, 0, tr.samples);
  } else if (!tr.threaded) {
    for (int i = 0; i < shards; ++i) {
      sums[static_cast<size_t>(i)] =
          run_shard(channel, tr.seed, static_cast<std::uint64_t>(i), shard_samples(i));
    }
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(shards));
    for (int i = 0; i < shards; ++i) {
      workers.emplace_back([&, i] {
        sums[static_cast<size_t>(i)] =
            run_shard(channel, tr.seed, static_cast<std::uint64_t>(i), shard_samples(i));
      });
    }
    for (auto& w : workers) w.join();
  }

  ShardSums total;
  for (const auto& s : sums) {  // fixed merge order keeps results thread-count independent
    if (s.count == 0) continue;
    if (total.count == 0) {
      total.mean = s.mean;
      total.m2 = s.m2;
    } else {
      // Chan's pairwise combination of Welford accumulators.
      const double delta = s.mean - total.mean;
      const long n = total.count + s.count;
      total.m2 += s.m2 + delta * delta * static_cast<double>(total.count) *
                             static_cast<double>(s.count) / static_cast<double>(n);
      total.mean += delta * static_cast<double>(s.count) / static_cast<double>(n);
    }
    for (size_t k = 0; k < 4; ++k) total.outcome_sum[k] += s.outcome_sum[k];
    total.count += s.count;
  }

  SimResult out;
  out.samples = total.count;
  out.seed = tr.seed;
  out.shards = shards;
  out.mean_fidelity = total.mean;
  if (total.count > 1) {
    const double var = std::max(0.0, total.m2 / static_cast<double>(total.count - 1));
    out.std_error = std::sqrt(var / static_cast<double>(total.count));
  }
  for (size_t k = 0; k < 4; ++k)
    out.per_outcome_fidelity[k] = total.outcome_sum[k] / static_cast<double>(total.count);
  return out;
}

nlohmann::ordered_json SimResult::to_json() const {
  nlohmann::ordered_json j;
  j["mean_fidelity"] = mean_fidelity;
  j["std_error"] = std_error;
  j["per_outcome_fidelity"] = per_outcome_fidelity;
  j["samples"] = samples;
  j["seed"] = seed;
  j["shards"] = shards;
  j["rng"] = rng_name;
  return j;
}

}  // namespace qtele
