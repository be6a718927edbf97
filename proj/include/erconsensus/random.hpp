#pragma once

#include <cstdint>
#include <random>

namespace erc {

/// SplitMix64 finalizer, used to turn (master_seed, stream_id) into an engine seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a child master seed, e.g. one per Monte Carlo trial.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// A reproducible stream of random draws identified by (master_seed, stream_id).
///
/// Streams are derived by hashing the pair through SplitMix64 and seeding a
/// std::mt19937_64 with the result. The engine output is fully specified by the
/// standard, and the conversions below avoid the implementation-defined
/// distributions of <random>, so draw sequences match across platforms.
class RandomSource {
 public:
  RandomSource(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Consumes exactly one draw whatever the value of p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; consumes two draws.
  double normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace erc
