#pragma once

#include <cstdint>
#include <random>

namespace gr2 {

/// One SplitMix64 scrambling step; used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random source. The generator (std::mt19937_64) and all
/// scalar conversions are pinned explicitly, so a given seed produces the
/// same stream on every platform. Distributions from <random> are not used
/// because their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal deviate (Box-Muller, cached spare).
  double normal();

  /// Generator for sub-task `index` of a campaign keyed by `seed`.
  static Rng trial(std::uint64_t seed, std::uint64_t index);

  /// Seed value that replays trial `index` of a campaign run with `seed`:
  /// a fresh campaign started from the returned value reaches the same
  /// stream at its trial 0.
  static std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gr2
