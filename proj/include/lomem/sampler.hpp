#ifndef LOMEM_SAMPLER_HPP
#define LOMEM_SAMPLER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lomem/model.hpp"
#include "lomem/rng.hpp"
#include "lomem/spectral.hpp"

namespace lomem {

/// Initial random-walk scales of the Metropolis blocks. All but `knot` act
/// on an unconstrained (log / logit) scale; `knot` is a fraction of the knot
/// support width.
struct ProposalScales {
  double stick = 1.0;
  double knot = 0.1;
  double xi = 1.0;
  double nu = 1.5;
  double hyper = 1.0;  ///< a and b, on logit(x / ab_upper)
  double pi = 1.0;
  double param = 0.05; ///< parametric Whittle chain, per coordinate
};

struct ChainConfig {
  std::size_t iterations = 20000;
  std::size_t burn_in = 10000;
  std::size_t thin = 5;
  std::uint64_t seed = 1;
  std::size_t components = 30;  ///< truncation level H
  KernelKind kernel = KernelKind::DoubleExponential;
  ProposalScales scales;
  /// Robbins-Monro adaptation of the proposal scales during burn-in.
  bool adapt = true;
  double target_acceptance = 0.44;
  bool store_states = false;
  PriorConfig prior;

  /// Throws InvalidInput unless burn_in < iterations, thin >= 1, components >= 1.
  void validate() const;
  /// floor((iterations - burn_in) / thin)
  std::size_t kept_draws() const { return (iterations - burn_in) / thin; }
};

/// Kept (post burn-in, thinned) draws of one chain.
struct PosteriorDraws {
  std::vector<double> d;
  std::vector<double> c;
  /// Other scalar traces by name (e.g. "xi", "phi", "sigma2").
  std::map<std::string, std::vector<double>> traces;
  std::vector<ModelState> states;  ///< only when ChainConfig::store_states
  /// Post burn-in acceptance rate per Metropolis block.
  std::map<std::string, double> acceptance;
  std::uint64_t seed = 0;
};

struct PosteriorSummary {
  double mean = 0.0;
  double median = 0.0;
  double map = 0.0;
  double lower = 0.0;  ///< 2.5% empirical quantile
  double upper = 0.0;  ///< 97.5% empirical quantile
  double ess = 0.0;
  std::size_t draws = 0;
  std::size_t chains = 1;
};

/// Starting state: (c, d) from the least-squares fit (d pulled 1e-3 inside
/// (-1, 1/2) if needed), atoms from residual moments, knots evenly spread
/// over the knot support, all observations on the first atom.
/// The knot support is [2 pi / n, max frequency of the sample].
ModelState init_state(const RegressionSample& data, const ChainConfig& config,
                      std::uint64_t seed);

/// Blocked Gibbs / Metropolis-within-Gibbs transition kernel for the
/// semiparametric model. Holds a reference to `data`, which must outlive it;
/// responses may be changed between sweeps (frequencies must not).
class GibbsSampler {
 public:
  GibbsSampler(const RegressionSample& data, ChainConfig config, ModelState initial,
               std::uint64_t seed);

  /// Joint draw of (s_j, component) from their exact categorical conditional.
  void update_allocations();
  /// pi_h by logit random walk, mu_h from its Gaussian conditional, atom
  /// variances from their inverse-gamma conditionals; empty atoms from the prior.
  void update_atoms();
  /// V_h, psi_h, xi, nu, a, b by Metropolis; sigma2_theta from its
  /// inverse-gamma conditional.
  void update_sticks_knots_bandwidth();
  /// (c, d) from the exact bivariate Gaussian conditional, d truncated to the
  /// prior support.
  void update_cd();
  /// allocations -> atoms -> sticks/knots/bandwidth -> (c, d)
  void sweep();

  const ModelState& state() const noexcept { return state_; }
  void set_state(ModelState state);
  Rng& rng() noexcept { return rng_; }
  const ChainConfig& config() const noexcept { return config_; }

  void set_adapting(bool on) noexcept { adapting_ = on; }
  void reset_acceptance();
  std::map<std::string, double> acceptance_rates() const;

  // Exact conditionals, exposed so they can be checked against oracles.

  /// Probabilities of (atom h, component k) at index 2h + k for observation j.
  std::vector<double> allocation_probabilities(std::size_t j) const;

  struct GaussianCd {
    std::array<double, 2> mean;  ///< (c, d), before truncation of d
    double var_c, cov_cd, var_d;
  };
  GaussianCd cd_conditional() const;

  struct InvGammaParams {
    double shape, rate;
  };
  /// Conditional of sigma_{kh}^2 given allocations, pi_h and mu_h.
  InvGammaParams atom_variance_conditional(std::size_t h, int component) const;

  /// Unnormalized log conditional density of V_h (h < H-1) at v.
  double stick_log_conditional(std::size_t h, double v) const;
  /// Unnormalized log conditional density of psi_h at psi.
  double knot_log_conditional(std::size_t h, double psi) const;

 private:
  struct Adaptive {
    double log_scale = 0.0;
    std::size_t proposals = 0;
    std::size_t accepts = 0;
  };

  /// Per-atom constants of the two Gaussian components.
  struct ComponentTerms {
    double mean[2];
    double half_precision[2];
    double log_coef[2];  ///< log weight - log sd, without log sqrt(2 pi)
  };
  static std::vector<ComponentTerms> component_terms(const ModelState& s);

  void refresh_weights();
  /// Normalized allocation probabilities of observation j.
  void allocation_weights(std::size_t j, std::span<const ComponentTerms> terms,
                          std::vector<double>& prob, std::vector<double>& stick) const;
  void regroup();
  double allocation_log_weight_sum(std::span<const double> weights) const;
  /// Random-walk Metropolis step on an unconstrained scale; returns new value.
  template <class LogTarget>
  double rw_step(double z, LogTarget&& log_target, Adaptive& block);
  /// As above with the log target at z already known.
  template <class LogTarget>
  double rw_step(double z, double current, LogTarget&& log_target, Adaptive& block);
  /// knot_log_conditional at the current knot, from the cached weights.
  double current_knot_log_conditional(std::size_t h) const;

  const RegressionSample& data_;
  ChainConfig config_;
  ModelState state_;
  Rng rng_;
  bool adapting_ = false;
  std::size_t adapt_steps_ = 0;

  std::vector<double> weights_;  ///< kernel weights, observation-major (m x H)
  std::vector<std::vector<std::size_t>> members_;  ///< observations per atom

  std::vector<Adaptive> stick_blocks_, knot_blocks_, pi_blocks_;
  Adaptive xi_block_, nu_block_, a_block_, b_block_;
};

/// Runs one chain: iterations sweeps, adaptation during burn-in only, keeps
/// every thin-th post burn-in draw. Reproducible given config.seed. Numeric
/// errors are rethrown with the iteration index.
PosteriorDraws run_chain(const RegressionSample& data, const ChainConfig& config);

/// Summary of the d draws. Throws InvalidInput with fewer than 100 draws.
PosteriorSummary summarize(const PosteriorDraws& draws);
PosteriorSummary summarize(std::span<const double> draws);

/// Linear-interpolation (type 7) quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

/// Effective sample size with Geyer's initial monotone sequence estimator.
double effective_sample_size(std::span<const double> draws);

/// Mode of a Gaussian kernel density estimate with Silverman's bandwidth.
double kde_mode(std::span<const double> draws);

}  // namespace lomem

#endif  // LOMEM_SAMPLER_HPP
