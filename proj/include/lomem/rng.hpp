#ifndef LOMEM_RNG_HPP
#define LOMEM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace lomem {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive well-separated seeds from small
/// integers (scenario / replicate indices).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replicate `replicate` of scenario `scenario` under `base`:
/// splitmix64(base ^ splitmix64(splitmix64(scenario) + replicate)).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t scenario,
                                    std::uint64_t replicate) noexcept {
  return splitmix64(base ^ splitmix64(splitmix64(scenario) + replicate));
}

inline double uniform01(Rng& rng) {
  // (0,1) open interval; 53 random bits.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Gamma(shape, 1) draw.
inline double gamma_draw(Rng& rng, double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(rng);
}

/// Inverse-gamma draw with density proportional to x^{-shape-1} exp(-rate/x).
inline double inv_gamma_draw(Rng& rng, double shape, double rate) {
  return rate / gamma_draw(rng, shape);
}

/// log of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
/// draw itself underflows to zero.
inline double log_gamma_draw(Rng& rng, double shape) {
  if (shape >= 1.0) return std::log(gamma_draw(rng, shape));
  // Gamma(a) = Gamma(a + 1) * U^{1/a}
  return std::log(gamma_draw(rng, shape + 1.0)) + std::log(uniform01(rng)) / shape;
}

inline double beta_draw(Rng& rng, double a, double b) {
  const double lx = log_gamma_draw(rng, a);
  const double ly = log_gamma_draw(rng, b);
  // x / (x + y) = 1 / (1 + exp(ly - lx))
  return 1.0 / (1.0 + std::exp(ly - lx));
}

}  // namespace lomem

#endif  // LOMEM_RNG_HPP
