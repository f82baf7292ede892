#ifndef LOMEM_BASELINES_HPP
#define LOMEM_BASELINES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "lomem/arfima.hpp"
#include "lomem/sampler.hpp"
#include "lomem/spectral.hpp"

namespace lomem {

// ---------------------------------------------------------------------------
// Least-squares log-periodogram regression
// ---------------------------------------------------------------------------

struct LsEstimate {
  double c = 0.0;
  double d = 0.0;
  double se = 0.0;     ///< standard error of d
  double lower = 0.0;  ///< d - 1.96 se
  double upper = 0.0;  ///< d + 1.96 se
  std::size_t bandwidth = 0;
  std::size_t trim = 0;
  std::size_t pooling = 1;
  std::size_t points = 0;  ///< number of grid points used
};

/// 1 + floor(n^0.8), capped at floor(n/2). Requires n >= 16.
std::size_t default_bandwidth(std::size_t n);

/// OLS of the responses on (1, regressor); the slope is d. For K = 1 the
/// standard error is the asymptotic sqrt(pi^2 / (24 m')), m' grid points;
/// otherwise the residual-based OLS standard error.
LsEstimate fit_ls(const RegressionSample& sample);

/// Periodogram + pooling + fit_ls. `bandwidth` defaults to default_bandwidth(n).
LsEstimate estimate_ls(const TimeSeries& series, std::size_t trim = 1, std::size_t pooling = 1,
                       std::optional<std::size_t> bandwidth = std::nullopt);

// ---------------------------------------------------------------------------
// Parametric Whittle comparison
// ---------------------------------------------------------------------------

/// sum_{j=1}^{floor(n/2)} [log f(lambda_j) + I(lambda_j) / f(lambda_j)]
double whittle_neg_loglik(const TimeSeries& series, const ArfimaParams& params);
double whittle_neg_loglik(const Periodogram& pg, const ArfimaParams& params);

/// Minimizer over sigma2 of the Whittle objective with the shape (d, phi,
/// theta) of `shape` held fixed: (2 pi / N) sum_j I_j / g_j.
double whittle_profile_sigma2(const Periodogram& pg, const ArfimaParams& shape);

enum class ArfimaOrder {
  Fractional,  ///< ARFIMA(0, d, 0)
  Arma11,      ///< ARFIMA(1, d, 1)
};

/// Random-walk Metropolis-within-Gibbs on (d, phi, theta, log sigma2) against
/// the Whittle pseudo-posterior. Priors: d ~ Unif(-1, 1/2), phi, theta ~
/// Unif(-1, 1), sigma2 ~ IG(0.1, 0.1). Traces "phi", "theta", "sigma2".
PosteriorDraws run_param_chain(const TimeSeries& series, ArfimaOrder order,
                               const ChainConfig& config);

// ---------------------------------------------------------------------------
// Persistence diagnostics
// ---------------------------------------------------------------------------

/// Slope of log mean(R/S) on log window size over dyadic windows 16, 32, ...
/// <= n/2. The corrected variant replaces the standard deviation by Lo's
/// Bartlett-weighted long-run deviation with lag q = floor(4 (s/100)^{1/4})
/// for window length s. Requires n >= 64.
double rs_hurst(const TimeSeries& series, bool corrected);

/// 0.5 + slope of log(R/S / E[R/S]) where E[R/S] is the Anis-Lloyd
/// expectation under white noise; the same dyadic windows as rs_hurst.
double empirical_hurst(const TimeSeries& series);

struct Dfa2Result {
  double alpha = 0.0;
  /// True when the fluctuation function is numerically zero (the input is
  /// annihilated by quadratic detrending); alpha is then meaningless.
  bool degenerate = false;
  std::vector<double> scales;
  std::vector<double> fluctuations;
};

/// Second-order detrended fluctuation analysis over 16 log-spaced window
/// sizes from 10 to n/4. Requires n >= 256.
Dfa2Result dfa2(const TimeSeries& series);

struct DiagnosticsReport {
  double rs_hurst = 0.0;
  double corrected_rs_hurst = 0.0;
  double empirical_hurst = 0.0;
  double dfa2_slope = 0.0;
  bool dfa2_degenerate = false;
};

DiagnosticsReport diagnostics(const TimeSeries& series);

}  // namespace lomem

#endif  // LOMEM_BASELINES_HPP
