#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace driftfit {

// Counter-based splittable generator. The state advances by the golden-ratio
// increment and the output is the SplitMix64 finalizer, so any (seed, index,
// channel) triple maps to an independent stream without sequential jumping.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Derive an independent sub-stream by hashing (seed, index, channel).
  static Rng derive(std::uint64_t seed, std::uint64_t index, std::uint64_t channel) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (index + 0xbf58476d1ce4e5b9ULL));
    h = mix(h ^ (channel + 0x94d049bb133111ebULL));
    return Rng(h);
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  double exponential() { return -std::log(uniform_pos()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Knuth's product method, chunked so exp(-mean) never underflows.
  long poisson(double mean) {
    long count = 0;
    while (mean > 16.0) {
      count += poisson_small(16.0);
      mean -= 16.0;
    }
    return count + poisson_small(mean);
  }

 private:
  long poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double prod = uniform_pos();
    long count = 0;
    while (prod > limit) {
      prod *= uniform_pos();
      ++count;
    }
    return count;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Channel tags for sub-stream derivation.
namespace rng_channel {
inline constexpr std::uint64_t kDiffusion = 1;
inline constexpr std::uint64_t kJumps = 2;
inline constexpr std::uint64_t kReplication = 3;
inline constexpr std::uint64_t kOraclePath = 4;
}  // namespace rng_channel

}  // namespace driftfit
