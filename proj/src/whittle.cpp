#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "densities.hpp"
#include "lomem/baselines.hpp"
#include "lomem/error.hpp"

namespace lomem {

using detail::kNegInf;

namespace {

// Parameter-free pieces of log f, computed once per periodogram.
class WhittleTerms {
 public:
  explicit WhittleTerms(const Periodogram& pg) : pg_(pg) {
    const std::size_t N = pg.size();
    cos_.resize(N);
    log2sin_.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
      const double lam = pg.frequencies[j];
      cos_[j] = std::cos(lam);
      log2sin_[j] = std::log(2.0 * std::sin(0.5 * lam));
    }
  }

  // sum_j [log f_j + I_j / f_j]
  double neg_loglik(const ArfimaParams& p) const {
    const std::size_t N = pg_.size();
    const double two_pi = 2.0 * std::numbers::pi;
    double sum_log_shape = 0.0;
    double sum_ratio = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double ma = 1.0 + p.theta * p.theta + 2.0 * p.theta * cos_[j];
      const double ar = 1.0 + p.phi * p.phi - 2.0 * p.phi * cos_[j];
      const double log_g = std::log(ma) - std::log(ar) - 2.0 * p.d * log2sin_[j];
      sum_log_shape += log_g;
      sum_ratio += pg_.ordinates[j] * std::exp(-log_g);
    }
    const double n = static_cast<double>(N);
    return n * std::log(p.sigma2 / two_pi) + sum_log_shape + two_pi / p.sigma2 * sum_ratio;
  }

 private:
  const Periodogram& pg_;
  std::vector<double> cos_;
  std::vector<double> log2sin_;
};

void check_whittle_domain(const ArfimaParams& params, const Periodogram& pg) {
  params.validate();
  if (pg.size() == 0) throw InvalidInput("whittle: empty periodogram");
}

}  // namespace

double whittle_neg_loglik(const Periodogram& pg, const ArfimaParams& params) {
  check_whittle_domain(params, pg);
  const double value = WhittleTerms(pg).neg_loglik(params);
  if (!std::isfinite(value)) throw DomainError("whittle: spectral density vanished or diverged");
  return value;
}

double whittle_neg_loglik(const TimeSeries& series, const ArfimaParams& params) {
  return whittle_neg_loglik(periodogram(series), params);
}

double whittle_profile_sigma2(const Periodogram& pg, const ArfimaParams& shape) {
  ArfimaParams unit = shape;
  unit.sigma2 = 2.0 * std::numbers::pi;  // f = g
  check_whittle_domain(unit, pg);
  double s = 0.0;
  for (std::size_t j = 0; j < pg.size(); ++j) {
    s += pg.ordinates[j] / spectral_density(unit, pg.frequencies[j]);
  }
  return 2.0 * std::numbers::pi * s / static_cast<double>(pg.size());
}

PosteriorDraws run_param_chain(const TimeSeries& series, ArfimaOrder order,
                               const ChainConfig& config) {
  config.validate();
  const Periodogram pg = periodogram(series);
  const WhittleTerms terms(pg);
  const PriorConfig& prior = config.prior;
  constexpr double kSigmaShape = 0.1;
  constexpr double kSigmaRate = 0.1;

  auto log_post = [&](const ArfimaParams& p) {
    if (!(p.d > prior.d_lower && p.d < prior.d_upper)) return kNegInf;
    if (!(std::abs(p.phi) < 1.0 && std::abs(p.theta) < 1.0)) return kNegInf;
    if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2)) return kNegInf;
    const double nll = terms.neg_loglik(p);
    if (!std::isfinite(nll)) return kNegInf;
    return -nll + detail::log_inv_gamma_pdf(p.sigma2, kSigmaShape, kSigmaRate);
  };

  // Start at the least-squares d and the profiled scale.
  ArfimaParams cur;
  {
    const std::size_t n = series.size();
    const std::size_t m = n >= 16 ? default_bandwidth(n) : n / 2;
    double d0 = 0.0;
    try {
      d0 = fit_ls(pooled_log_periodogram(pg, 1, 1, m)).d;
    } catch (const InvalidInput&) {
      d0 = 0.0;
    }
    cur.d = std::clamp(d0, prior.d_lower + 1e-3, prior.d_upper - 1e-3);
    cur.sigma2 = whittle_profile_sigma2(pg, cur);
  }

  Rng rng(splitmix64(config.seed));
  const bool arma = order == ArfimaOrder::Arma11;
  // Coordinates: 0 = d, 1 = phi, 2 = theta, 3 = log sigma2.
  const std::size_t dims = 4;
  std::array<double, 4> log_scale{};
  log_scale.fill(std::log(config.scales.param));
  std::array<std::size_t, 4> proposals{}, accepts{};
  double current = log_post(cur);
  if (!std::isfinite(current)) throw NumericError("parametric chain: invalid starting point");

  PosteriorDraws out;
  out.seed = config.seed;
  const std::size_t keep = config.kept_draws();
  out.d.reserve(keep);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    const bool adapting = config.adapt && it < config.burn_in;
    if (it == config.burn_in) {
      proposals.fill(0);
      accepts.fill(0);
    }
    for (std::size_t k = 0; k < dims; ++k) {
      if (!arma && (k == 1 || k == 2)) continue;
      ArfimaParams prop = cur;
      const double step = std::exp(log_scale[k]) * standard_normal(rng);
      double log_jacobian = 0.0;
      switch (k) {
        case 0: prop.d += step; break;
        case 1: prop.phi += step; break;
        case 2: prop.theta += step; break;
        default:
          // Random walk on log sigma2: target picks up the Jacobian sigma2.
          prop.sigma2 = cur.sigma2 * std::exp(step);
          log_jacobian = step;
          break;
      }
      const double candidate = log_post(prop);
      double log_ratio = candidate - current + log_jacobian;
      if (std::isnan(log_ratio)) log_ratio = kNegInf;
      const double accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
      ++proposals[k];
      if (uniform01(rng) < accept_prob) {
        ++accepts[k];
        cur = prop;
        current = candidate;
      }
      if (adapting) {
        const double gain = std::pow(static_cast<double>(it) + 1.0, -0.6);
        log_scale[k] = std::clamp(log_scale[k] + gain * (accept_prob - config.target_acceptance),
                                  -15.0, 2.0);
      }
    }
    if (it < config.burn_in || (it - config.burn_in + 1) % config.thin != 0) continue;
    out.d.push_back(cur.d);
    out.traces["phi"].push_back(cur.phi);
    out.traces["theta"].push_back(cur.theta);
    out.traces["sigma2"].push_back(cur.sigma2);
  }

  const char* names[] = {"d", "phi", "theta", "sigma2"};
  for (std::size_t k = 0; k < dims; ++k) {
    if (!arma && (k == 1 || k == 2)) continue;
    out.acceptance[names[k]] =
        proposals[k] == 0 ? 0.0 : static_cast<double>(accepts[k]) / static_cast<double>(proposals[k]);
  }
  return out;
}

}  // namespace lomem
