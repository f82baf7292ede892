#include "lomem/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "densities.hpp"
#include "lomem/error.hpp"

namespace lomem {

using detail::kNegInf;

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::SquaredExponential ? "squared-exponential" : "double-exponential";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "squared-exponential") return KernelKind::SquaredExponential;
  if (name == "double-exponential") return KernelKind::DoubleExponential;
  throw InvalidInput("unknown kernel kind '" + std::string(name) +
                     "' (expected squared-exponential or double-exponential)");
}

double log_component_pdf(double u, const Atom& atom, int component) {
  if (component == 0) return std::log(atom.pi) + detail::log_normal_pdf(u, atom.mu, atom.sigma1);
  return std::log1p(-atom.pi) + detail::log_normal_pdf(u, atom.mu2(), atom.sigma2);
}

double log_kernel_pdf(double u, const Atom& atom) {
  return detail::log_sum_exp(log_component_pdf(u, atom, 0), log_component_pdf(u, atom, 1));
}

double kernel_pdf(double u, const Atom& atom) { return std::exp(log_kernel_pdf(u, atom)); }

void mixture_weights(const StickState& sticks, double lambda, std::span<double> out) {
  const std::size_t H = sticks.size();
  double remaining = 1.0;
  for (std::size_t h = 0; h + 1 < H; ++h) {
    const double vw = sticks.v[h] * kernel_weight(lambda, sticks.knots[h], sticks.xi, sticks.kind);
    out[h] = vw * remaining;
    remaining *= 1.0 - vw;
  }
  out[H - 1] = remaining;
}

std::vector<double> mixture_weights(const StickState& sticks, double lambda) {
  std::vector<double> out(sticks.size());
  mixture_weights(sticks, lambda, out);
  return out;
}

void log_mixture_weights(const StickState& sticks, double lambda, std::span<double> out) {
  const std::size_t H = sticks.size();
  double log_remaining = 0.0;
  for (std::size_t h = 0; h + 1 < H; ++h) {
    const double vw = sticks.v[h] * kernel_weight(lambda, sticks.knots[h], sticks.xi, sticks.kind);
    out[h] = vw > 0.0 ? std::log(vw) + log_remaining : kNegInf;
    log_remaining += std::log1p(-vw);
  }
  out[H - 1] = log_remaining;
}

double loglik(std::span<const double> y, std::span<const double> x,
              std::span<const double> lambda, const ModelState& state) {
  if (y.size() != x.size() || y.size() != lambda.size()) {
    throw InvalidInput("loglik: responses, regressors and frequencies differ in length");
  }
  const std::size_t H = state.components();
  std::vector<double> logp(H);
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    log_mixture_weights(state.sticks, lambda[j], logp);
    const double u = residual(y[j], x[j], state);
    double acc = kNegInf;
    for (std::size_t h = 0; h < H; ++h) {
      if (logp[h] == kNegInf) continue;
      acc = detail::log_sum_exp(acc, logp[h] + log_kernel_pdf(u, state.atoms[h]));
    }
    total += acc;
  }
  if (!std::isfinite(total)) throw NumericError("loglik: non-finite log-likelihood");
  return total;
}

double loglik(const RegressionSample& data, const ModelState& state) {
  return loglik(data.responses, data.regressors, data.frequencies, state);
}

double log_prior(const ModelState& s, const PriorConfig& p) {
  double lp = detail::log_normal_pdf(s.c, 0.0, std::sqrt(p.c_variance));
  lp += detail::log_uniform_pdf(s.d, p.d_lower, p.d_upper);
  lp += detail::log_uniform_pdf(s.sticks.a, 0.0, p.ab_upper);
  lp += detail::log_uniform_pdf(s.sticks.b, 0.0, p.ab_upper);
  lp += detail::log_uniform_pdf(s.nu, 0.0, 1.0);
  if (lp == kNegInf) return kNegInf;

  lp += detail::log_inv_gamma_pdf(s.sticks.xi, p.xi_shape, 0.5 * s.nu * s.nu);
  lp += detail::log_inv_gamma_pdf(s.sigma2_theta, p.base_var_shape, p.base_var_rate);

  const StickState& st = s.sticks;
  const std::size_t H = s.components();
  const double knot_width = st.knot_hi - st.knot_lo;
  for (std::size_t h = 0; h < H; ++h) {
    if (!(st.knots[h] >= st.knot_lo && st.knots[h] <= st.knot_hi)) return kNegInf;
    lp -= std::log(knot_width);
    if (h + 1 < H) lp += detail::log_beta_pdf(st.v[h], st.a, st.b);

    const Atom& at = s.atoms[h];
    if (!(at.pi > 0.0 && at.pi < 1.0)) return kNegInf;  // Unif(0,1): log density 0
    lp += detail::log_normal_pdf(at.mu, 0.0, std::sqrt(s.sigma2_theta));
    lp += detail::log_inv_gamma_pdf(at.sigma1 * at.sigma1, p.atom_var_shape, p.atom_var_rate);
    lp += detail::log_inv_gamma_pdf(at.sigma2 * at.sigma2, p.atom_var_shape, p.atom_var_rate);
  }
  return std::isnan(lp) ? kNegInf : lp;
}

void validate(const ModelState& s, std::size_t observations) {
  const std::size_t H = s.components();
  if (H < 1) throw InvalidInput("model state needs at least one component");
  if (s.sticks.v.size() != H || s.sticks.knots.size() != H) {
    throw InvalidInput("stick/knot vectors must have one entry per component");
  }
  if (s.alloc.size() != observations || s.comp.size() != observations) {
    throw InvalidInput("allocation vectors must have one entry per observation");
  }
  if (!(s.d > -1.0 && s.d < 0.5)) throw InvalidInput("d outside (-1, 1/2)");
  if (!(s.sticks.xi > 0.0)) throw InvalidInput("kernel bandwidth must be positive");
  for (std::size_t h = 0; h < H; ++h) {
    const Atom& a = s.atoms[h];
    if (!(a.pi > 0.0 && a.pi < 1.0) || !(a.sigma1 > 0.0) || !(a.sigma2 > 0.0)) {
      throw InvalidInput("atom " + std::to_string(h) + " violates 0<pi<1, sigma>0");
    }
    if (h + 1 < H && !(s.sticks.v[h] > 0.0 && s.sticks.v[h] < 1.0)) {
      throw InvalidInput("stick " + std::to_string(h) + " outside (0,1)");
    }
  }
  for (std::size_t j = 0; j < observations; ++j) {
    if (s.alloc[j] >= H || s.comp[j] > 1) {
      throw InvalidInput("allocation " + std::to_string(j) + " out of range");
    }
  }
}

}  // namespace lomem
