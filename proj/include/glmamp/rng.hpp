#pragma once

#include <cmath>
#include <cstdint>

namespace glmamp {

// Counter-based generator (splitmix64 stream). Identical seeds give
// bitwise-identical streams on every platform; fork() derives an
// independent stream for a worker without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), have_cached_(false), cached_(0.0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in (0,1)
  double next_uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  // standard normal via Box-Muller (pair cached)
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // independent sub-stream for worker `id`
  Rng fork(std::uint64_t id) const {
    std::uint64_t z = state_ ^ (0x632be59bd9b4e019ull + id * 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t state_;
  bool have_cached_;
  double cached_;
};

}  // namespace glmamp
