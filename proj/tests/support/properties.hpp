// Oracles and property checks shared by the unit tests and the acceptance run.
#ifndef LOMEM_TESTS_PROPERTIES_HPP
#define LOMEM_TESTS_PROPERTIES_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lomem/model.hpp"
#include "lomem/sampler.hpp"
#include "lomem/spectral.hpp"

namespace props {

struct Check {
  bool pass = false;
  std::string detail;
};

// --- oracles ---------------------------------------------------------------

/// |X_k|^2 / (2 pi n), k = 0..n-1, from the trigonometric double sum in long double.
std::vector<double> dft_ordinates(const std::vector<double>& x);

/// Two-component kernel density written from its definition.
double kernel_oracle(double u, const lomem::Atom& atom);

/// int u^power b(u) du by adaptive quadrature.
double kernel_moment(const lomem::Atom& atom, int power);

/// Stick-breaking weights as explicit products; the last stick is one.
std::vector<double> weights_oracle(const lomem::StickState& st, double lambda);

/// sum_j log sum_h p_h(lambda_j) b(y_j - c - d x_j).
double loglik_oracle(std::span<const double> y, std::span<const double> x,
                     std::span<const double> lambda, const lomem::ModelState& s);

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf);

/// Draw of the full state (parameters and allocations) from the prior.
lomem::ModelState draw_prior(const lomem::RegressionSample& data, const lomem::ChainConfig& config,
                             lomem::Rng& rng);

/// Responses y_j = c + d x_j + e_j with e_j from the allocated kernel component.
void simulate_responses(lomem::RegressionSample& data, const lomem::ModelState& s, lomem::Rng& rng);

// --- properties ------------------------------------------------------------

/// Parseval identity (1e-8) and shift invariance (1e-10) against the direct
/// DFT for several n <= 512.
Check periodogram_properties();

/// Weight simplex (1e-12) and zero kernel mean by quadrature (1e-6) over
/// `count` random states / atoms.
Check mixture_properties(std::size_t count = 1000);

/// loglik against the brute-force oracle on H <= 3, m <= 5 (1e-12).
Check loglik_property();

/// Closed-form conditionals of the sampler (inverse-gamma variances,
/// Gaussian (c, d), allocation odds, stick and knot log conditionals) at 1e-8.
Check gibbs_conditionals_property();

struct GewekeResult {
  double ks_d = 1.0;
  double ks_c = 1.0;
  double ks_xi = 1.0;
};
/// Successive-conditional simulator on H = 3, 20 observations: each cycle
/// runs `sweeps` sweeps of the transition kernel, then re-simulates the
/// responses. KS statistics of the kept d, c, xi against their priors.
GewekeResult geweke(std::size_t cycles, std::uint64_t seed, std::size_t sweeps = 1,
                    double atom_rate = 1.0);
Check geweke_property(std::size_t cycles = 5000);

struct ConcentrationResult {
  std::array<std::size_t, 3> bandwidths{250, 1000, 5000};
  std::array<double, 3> median_width{};
};
/// Median 95% interval width for d on ARFIMA(0, 0.3, 0), n = 10000, over
/// `seeds` series, for each bandwidth.
ConcentrationResult concentration(std::size_t seeds, const lomem::ChainConfig& chain);
Check concentration_property(std::size_t seeds = 10);

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace props

#endif
