#ifndef LOMEM_ARFIMA_HPP
#define LOMEM_ARFIMA_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lomem/spectral.hpp"

namespace lomem {

/// (1 - phi B)(1 - B)^d X_t = (1 + theta B) eps_t,  eps_t ~ N(0, sigma2).
struct ArfimaParams {
  double d = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double sigma2 = 1.0;

  /// Throws DomainError unless -1 < d < 1/2, |phi| < 1, |theta| < 1, sigma2 > 0.
  void validate() const;
};

/// Coefficients psi_0..psi_{count-1} of (1 - B)^{-d}:
/// psi_0 = 1, psi_k = psi_{k-1} (k - 1 + d) / k.
std::vector<double> fracdiff_ma_coefficients(double d, std::size_t count);

/// Number of discarded start-up values in `simulate`.
inline constexpr std::size_t kArfimaBurnIn = 1000;

/// Simulates n values. Fractional noise is the MA(infinity) representation
/// truncated at 2(n + burn-in) coefficients applied to Gaussian innovations;
/// the ARMA(1,1) filter is then run recursively and the first kArfimaBurnIn
/// values are dropped. Deterministic in `seed`.
TimeSeries simulate(const ArfimaParams& params, std::size_t n, std::uint64_t seed);

/// f(lambda) = sigma2/(2 pi) |1 + theta e^{-i lambda}|^2 / |1 - phi e^{-i lambda}|^2
///             * (2 sin(lambda/2))^{-2d}.
/// lambda must lie in [0, pi]; lambda = 0 is only admissible for d <= 0.
double spectral_density(const ArfimaParams& params, double lambda);

/// log of spectral_density, without the final exponentiation.
double log_spectral_density(const ArfimaParams& params, double lambda);

}  // namespace lomem

#endif  // LOMEM_ARFIMA_HPP
