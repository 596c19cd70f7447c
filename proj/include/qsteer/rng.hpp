#pragma once

#include <cmath>
#include <cstdint>

namespace qsteer {

// Deterministic, platform-independent random source (splitmix64 core).
// std::uniform_real_distribution / std::poisson_distribution are not
// guaranteed to produce identical streams across standard libraries, and
// reproducible reports are part of the CLI contract, so we roll our own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, polar Box-Muller (one value per call, no cached state)
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // Poisson deviate with the exact distribution: multiplication method for
  // small means, Hormann's PTRD transformed rejection otherwise.
  long long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) return poisson_small(mean);
    return poisson_ptrd(mean);
  }

  // independent child stream, stable across platforms
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  long long poisson_small(double mean) {
    const double limit = std::exp(-mean);
    double prod = 1.0;
    long long k = 0;
    do {
      ++k;
      prod *= uniform();
    } while (prod > limit);
    return k - 1;
  }

  long long poisson_ptrd(double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform();
      const double us = 0.5 - std::abs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double k = kf;
      const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      const double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
      if (lhs <= rhs) return static_cast<long long>(kf);
    }
  }

  std::uint64_t state_;
};

}  // namespace qsteer
