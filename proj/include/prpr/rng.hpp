#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace prpr {

/// SplitMix64 finalizer; used to derive independent engine seeds from a
/// (seed, stream, ...) path.
std::uint64_t splitmix64(std::uint64_t x);

/// Hash a root seed and a path of stream identifiers into a 64-bit seed.
/// derive_seed(s, {a, b}) is the seed used for sub-stream b of stream a.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Reproducible random source: std::mt19937_64 (whose output sequence is fixed
/// by the C++ standard) seeded through derive_seed, with uniform and normal
/// variates computed here rather than by <random> distributions, whose
/// algorithms are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Child generator for the given stream; does not advance *this.
  [[nodiscard]] Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace prpr
