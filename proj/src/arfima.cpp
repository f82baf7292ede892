#include "lomem/arfima.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "fftw_lock.hpp"
#include "lomem/error.hpp"
#include "lomem/rng.hpp"

namespace lomem {

namespace {

// Linear convolution of `signal` with `filter`, returning outputs
// k = filter.size()-1 .. signal.size()-1 (those with a complete filter window).
std::vector<double> valid_convolution(const std::vector<double>& signal,
                                      const std::vector<double>& filter) {
  const std::size_t len = signal.size() + filter.size() - 1;
  std::size_t nfft = 1;
  while (nfft < len) nfft <<= 1;
  const std::size_t bins = nfft / 2 + 1;

  double* a = fftw_alloc_real(nfft);
  double* b = fftw_alloc_real(nfft);
  fftw_complex* fa = fftw_alloc_complex(bins);
  fftw_complex* fb = fftw_alloc_complex(bins);
  fftw_plan pa, pb, inv;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), a, fa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), b, fb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(nfft), fa, a, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < nfft; ++i) {
    a[i] = i < signal.size() ? signal[i] : 0.0;
    b[i] = i < filter.size() ? filter[i] : 0.0;
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute(inv);

  std::vector<double> out(signal.size() - filter.size() + 1);
  const double scale = 1.0 / static_cast<double>(nfft);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i + filter.size() - 1] * scale;

  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(inv);
  }
  fftw_free(a);
  fftw_free(b);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

void check_d(double d) {
  if (!(d > -1.0 && d < 0.5)) {
    throw DomainError("long-memory parameter d must lie in (-1, 1/2), got " + std::to_string(d));
  }
}

}  // namespace

void ArfimaParams::validate() const {
  check_d(d);
  if (!(std::abs(phi) < 1.0)) throw DomainError("|phi| must be < 1 for stationarity");
  if (!(std::abs(theta) < 1.0)) throw DomainError("|theta| must be < 1 for invertibility");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("innovation variance must be positive");
  }
}

std::vector<double> fracdiff_ma_coefficients(double d, std::size_t count) {
  check_d(d);
  if (count == 0) throw InvalidInput("coefficient count must be >= 1");
  std::vector<double> psi(count);
  psi[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k) {
    const double kk = static_cast<double>(k);
    psi[k] = psi[k - 1] * (kk - 1.0 + d) / kk;
  }
  return psi;
}

TimeSeries simulate(const ArfimaParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n < TimeSeries::kMinLength) throw InvalidInput("simulate: n must be >= 4");

  const std::size_t total = n + kArfimaBurnIn;
  const std::size_t taps = 2 * total;
  Rng rng(seed);
  const double sd = std::sqrt(params.sigma2);
  std::vector<double> eps(total + taps - 1);
  for (auto& e : eps) e = sd * standard_normal(rng);

  std::vector<double> noise;
  if (params.d == 0.0) {
    noise.assign(eps.end() - static_cast<std::ptrdiff_t>(total), eps.end());
  } else {
    noise = valid_convolution(eps, fracdiff_ma_coefficients(params.d, taps));
  }

  // (1 - phi B) X_t = W_t + theta W_{t-1}
  std::vector<double> x(total);
  double prev_x = 0.0;
  double prev_w = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    x[t] = params.phi * prev_x + noise[t] + params.theta * prev_w;
    prev_x = x[t];
    prev_w = noise[t];
  }
  return TimeSeries(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(kArfimaBurnIn),
                                        x.end()));
}

double log_spectral_density(const ArfimaParams& params, double lambda) {
  params.validate();
  if (!(lambda >= 0.0) || lambda > std::numbers::pi) {
    throw DomainError("spectral_density: frequency must lie in (0, pi]");
  }
  if (lambda == 0.0 && params.d > 0.0) {
    throw DomainError("spectral_density: pole at the origin for d > 0");
  }
  const std::complex<double> z = std::polar(1.0, -lambda);
  const double ma = std::norm(1.0 + params.theta * z);
  const double ar = std::norm(1.0 - params.phi * z);
  double out = std::log(params.sigma2 / (2.0 * std::numbers::pi)) + std::log(ma) - std::log(ar);
  if (params.d != 0.0) out -= 2.0 * params.d * std::log(2.0 * std::sin(0.5 * lambda));
  return out;
}

double spectral_density(const ArfimaParams& params, double lambda) {
  return std::exp(log_spectral_density(params, lambda));
}

}  // namespace lomem
