#include "gr2/rng.hpp"

#include <cmath>

namespace gr2 {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() {
  // 53 high bits of a 64-bit draw, scaled into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Rng Rng::trial(std::uint64_t seed, std::uint64_t index) {
  return Rng(trial_seed(seed, index));
}

std::uint64_t Rng::trial_seed(std::uint64_t seed, std::uint64_t index) {
  // index scaled by an odd constant stays injective mod 2^64; XOR keys it
  // to the master seed. Index 0 maps to the master seed itself, so a
  // reported trial seed replays as trial 0.
  return seed ^ (index * 0x9e3779b97f4a7c15ULL);
}

}  // namespace gr2
