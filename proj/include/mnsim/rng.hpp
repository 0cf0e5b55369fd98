#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace mnsim {

// splitmix64 (Vigna 2015). Used both as the uniform source of every stream
// and as the mixing function for deriving child streams from a master seed.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// A deterministic random stream with the distribution samplers the simulator
/// needs. All samplers are implemented via explicit inverse-CDF or rejection
/// so that a given seed produces the same values on every platform (the
/// std::random distributions are implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return mix64(state_ += kGoldenGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double next_double_open() { return 1.0 - next_double(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Box-Muller; consumes two uniforms per draw, no cached spare.
  double normal(double mean, double sigma) {
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Rejection-sampled normal conditioned on [lo, hi].
  double truncated_normal(double mean, double sigma, double lo, double hi) {
    for (int i = 0; i < 1'000'000; ++i) {
      const double x = normal(mean, sigma);
      if (x >= lo && x <= hi) return x;
    }
    throw std::logic_error("truncated_normal: acceptance region too small");
  }

  double exponential(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log(next_double_open()) / rate;
  }

  /// Weibull with CDF 1 - exp(-(x/scale)^shape).
  double weibull(double shape, double scale) {
    return scale * std::pow(-std::log(next_double_open()), 1.0 / shape);
  }

  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  /// Generalized Pareto with location 0 and positive shape:
  /// x = scale * ((1-u)^(-shape) - 1) / shape.
  double generalized_pareto(double shape, double scale) {
    if (shape <= 0.0) throw std::invalid_argument("generalized_pareto: shape must be positive");
    return scale * (std::pow(next_double_open(), -shape) - 1.0) / shape;
  }

  /// Power law with density proportional to x^(-exponent) on [lo, hi],
  /// sampled by inverting the truncated CDF. Requires exponent > 1.
  double truncated_pareto(double exponent, double lo, double hi) {
    if (exponent <= 1.0 || lo <= 0.0 || hi <= lo)
      throw std::invalid_argument("truncated_pareto: need exponent > 1 and 0 < lo < hi");
    const double a = exponent - 1.0;
    const double r = std::pow(lo / hi, a);
    return lo * std::pow(1.0 - next_double() * (1.0 - r), -1.0 / a);
  }

  /// Index draw proportional to nonnegative weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("categorical: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("categorical: all weights zero");
    double t = next_double() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      t -= weights[i];
      last_positive = i;
      if (t < 0.0) return i;
    }
    return last_positive;  // guards against rounding at t == total
  }

  /// Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::uint64_t state_;
};

/// Named lanes keep every subsystem on its own stream. Draws for one entity
/// never depend on how many other entities the scenario has, which is what
/// makes adding a user leave everyone else's randomness untouched.
enum class StreamLane : std::uint64_t {
  Placement = 1,
  Mobility = 2,
  Shadowing = 3,
  Selection = 4,
  Profile = 5,
  Behavior = 6,
};

inline RandomStream derive_stream(std::uint64_t master_seed, StreamLane lane,
                                  std::uint64_t entity = 0, std::uint64_t sub = 0) {
  std::uint64_t h = mix64(master_seed + kGoldenGamma);
  h = mix64(h ^ (static_cast<std::uint64_t>(lane) * kGoldenGamma));
  h = mix64(h ^ (entity * 0xBF58476D1CE4E5B9ull));
  h = mix64(h ^ (sub * 0x94D049BB133111EBull));
  return RandomStream(h);
}

}  // namespace mnsim
