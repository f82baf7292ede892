// Log densities shared by the model, sampler and parametric baseline.
#ifndef LOMEM_DENSITIES_HPP
#define LOMEM_DENSITIES_HPP

#include <cmath>
#include <limits>
#include <numbers>

namespace lomem::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

inline double log_normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
}

/// x^{-shape-1} exp(-rate/x) rate^shape / Gamma(shape)
inline double log_inv_gamma_pdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

inline double log_beta_pdf(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) return kNegInf;
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + std::lgamma(a + b) -
         std::lgamma(a) - std::lgamma(b);
}

inline double log_uniform_pdf(double x, double lo, double hi) {
  if (!(x > lo && x < hi)) return kNegInf;
  return -std::log(hi - lo);
}

inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double inv_logit(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace lomem::detail

#endif  // LOMEM_DENSITIES_HPP
