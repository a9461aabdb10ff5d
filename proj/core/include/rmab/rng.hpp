#pragma once

#include <cstdint>
#include <random>

namespace rmab {

/// Seeded random stream with platform-independent derived distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard library distributions are not, so every draw used
/// by the simulator goes through the members below.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Always consumes exactly one draw, including for p <= 0 and p >= 1.
  bool bernoulli(double p) { return uniform() < p; }

  /// Inverse-transform exponential draw.
  double exponential(double rate);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return next(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent child stream identified by `stream`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace rmab
