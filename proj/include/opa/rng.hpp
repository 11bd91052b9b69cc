#pragma once

#include <cstdint>
#include <random>

namespace opa {

/// splitmix64 finalizer. Good avalanche, used to derive per-replica seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replica `replica` of a stream whose configured seed is `base`.
/// Replica 0 keeps the configured seed so single runs match sweep replica 0.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replica) noexcept {
  return replica == 0 ? base : mix_seed(base ^ mix_seed(replica));
}

/// One named random stream. Every draw consumes a fixed number of engine
/// outputs so stream alignment does not depend on parameter values.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// One uniform draw, true with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; two uniform draws, no cached state.
  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace opa
