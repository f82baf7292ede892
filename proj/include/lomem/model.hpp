#ifndef LOMEM_MODEL_HPP
#define LOMEM_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lomem/spectral.hpp"

namespace lomem {

/// Two-component Gaussian kernel constrained to mean zero:
///   b(u) = pi N(u; mu, sigma1^2) + (1 - pi) N(u; -mu pi / (1 - pi), sigma2^2).
struct Atom {
  double pi = 0.5;
  double mu = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;

  /// Location of the second component, fixed by the zero-mean constraint.
  double mu2() const noexcept { return -mu * pi / (1.0 - pi); }
};

enum class KernelKind { SquaredExponential, DoubleExponential };

std::string_view to_string(KernelKind kind);
/// Accepts "squared-exponential" / "double-exponential". Throws InvalidInput.
KernelKind parse_kernel_kind(std::string_view name);

/// Frequency-dependent stick-breaking weights. The last stick is treated as 1
/// (truncation), so v.back() is never read.
struct StickState {
  std::vector<double> v;      ///< V_h in (0,1)
  std::vector<double> knots;  ///< psi_h in [knot_lo, knot_hi]
  double xi = 1.0;            ///< kernel bandwidth
  KernelKind kind = KernelKind::DoubleExponential;
  double a = 1.0;  ///< shared Beta(a, b) stick hyperparameters
  double b = 1.0;
  double knot_lo = 0.0;  ///< support of the knots
  double knot_hi = 0.0;

  std::size_t size() const noexcept { return v.size(); }
};

/// Hyperparameters of the prior. Defaults follow the simulation-study setup.
struct PriorConfig {
  double c_variance = 1000.0;     ///< c ~ N(0, c_variance)
  double d_lower = -1.0;          ///< d ~ Unif(d_lower, d_upper)
  double d_upper = 0.5;
  double ab_upper = 10.0;         ///< a, b ~ Unif(0, ab_upper)
  double base_var_shape = 0.01;   ///< sigma2_theta ~ IG(shape, rate)
  double base_var_rate = 0.01;
  double atom_var_shape = 2.0;    ///< sigma_{1h}^2, sigma_{2h}^2 ~ IG(shape, rate)
  double atom_var_rate = 1.0;
  double xi_shape = 1.5;          ///< xi ~ IG(xi_shape, nu^2 / 2), nu ~ Unif(0, 1)
};

/// Full parameter state of the semiparametric model.
struct ModelState {
  double c = 0.0;
  double d = 0.0;
  std::vector<Atom> atoms;
  StickState sticks;
  std::vector<std::size_t> alloc;  ///< zero-based atom per observation
  std::vector<std::uint8_t> comp;  ///< 0: first kernel component, 1: second
  double nu = 0.5;
  double sigma2_theta = 1.0;

  std::size_t components() const noexcept { return atoms.size(); }
};

/// Density of the zero-mean kernel.
double kernel_pdf(double u, const Atom& atom);
double log_kernel_pdf(double u, const Atom& atom);

/// log of the weighted component density, pi_k N(u; m_k, s_k^2), k in {0, 1}.
double log_component_pdf(double u, const Atom& atom, int component);

/// exp(-(lambda - psi)^2 / xi^2) or exp(-|lambda - psi| / xi).
inline double kernel_weight(double lambda, double psi, double xi, KernelKind kind) {
  const double dist = std::abs(lambda - psi) / xi;
  return kind == KernelKind::SquaredExponential ? std::exp(-dist * dist) : std::exp(-dist);
}

/// p_h(lambda) = V_h w_h prod_{l<h} (1 - V_l w_l), with the remaining mass on
/// the last component. Writes H values into `out`.
void mixture_weights(const StickState& sticks, double lambda, std::span<double> out);
std::vector<double> mixture_weights(const StickState& sticks, double lambda);

/// log p_h(lambda) for all h.
void log_mixture_weights(const StickState& sticks, double lambda, std::span<double> out);

/// Residual of one observation, y - c - d x.
inline double residual(double y, double x, const ModelState& s) { return y - s.c - s.d * x; }

/// sum_j log sum_h p_h(lambda_j) b(y_j - c - d x_j; atom_h), in log space.
/// Throws NumericError on a non-finite result.
double loglik(std::span<const double> y, std::span<const double> x,
              std::span<const double> lambda, const ModelState& state);
double loglik(const RegressionSample& data, const ModelState& state);

/// Sum of log prior densities; -infinity outside the support. Atom variances
/// carry their inverse-gamma density in the variance parameterization.
double log_prior(const ModelState& state, const PriorConfig& prior);

/// Throws InvalidInput if the state breaks an invariant (sizes, supports).
void validate(const ModelState& state, std::size_t observations);

}  // namespace lomem

#endif  // LOMEM_MODEL_HPP
