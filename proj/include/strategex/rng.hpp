#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace strategex {

// SplitMix64 with explicit stream derivation. Experiment runners derive one
// stream per job from (seed, path...) so results do not depend on worker
// count or scheduling; the normal sampler is hand-rolled (Box-Muller) because
// std::normal_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  static Rng derive(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t s = mix(seed ^ 0x9e3779b97f4a7c15ull);
    for (uint64_t p : path) s = mix(s ^ mix(p + 0xbf58476d1ce4e5b9ull));
    return Rng(raw_tag{}, s);
  }

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

 private:
  struct raw_tag {};
  Rng(raw_tag, uint64_t s) : state_(s) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace strategex
