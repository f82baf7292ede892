#include "lomem/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "densities.hpp"
#include "lomem/baselines.hpp"
#include "lomem/error.hpp"

namespace lomem {

using detail::kNegInf;

namespace {

constexpr double kInteriorGap = 1e-3;

// Exponential-proposal rejection sampler for a standard normal restricted to
// [a, inf), a > 0 (Robert 1995).
double upper_tail_normal(Rng& rng, double a, double b) {
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (int tries = 0; tries < 100000; ++tries) {
    const double z = a - std::log(uniform01(rng)) / rate;
    if (z > b) continue;
    const double accept = std::exp(-0.5 * (z - rate) * (z - rate));
    if (uniform01(rng) <= accept) return z;
  }
  throw NumericError("truncated normal: rejection sampler stalled (pathological state)");
}

// Standard normal restricted to (a, b).
double truncated_standard_normal(Rng& rng, double a, double b) {
  if (a >= 0.0 || b <= 0.0) {
    // One-sided: reflect into the upper tail and use survival functions.
    const bool flip = b <= 0.0;
    const double lo = flip ? -b : a;
    const double hi = flip ? -a : b;
    const boost::math::normal_distribution<> n01;
    const double q_lo = boost::math::cdf(boost::math::complement(n01, lo));
    const double q_hi = hi == std::numeric_limits<double>::infinity()
                            ? 0.0
                            : boost::math::cdf(boost::math::complement(n01, hi));
    double z;
    if (q_lo - q_hi > 1e-280) {
      const double u = q_hi + (q_lo - q_hi) * uniform01(rng);
      z = boost::math::quantile(boost::math::complement(n01, u));
      z = std::clamp(z, lo, hi);
    } else {
      z = upper_tail_normal(rng, lo, hi);
    }
    return flip ? -z : z;
  }
  const boost::math::normal_distribution<> n01;
  const double p_a = boost::math::cdf(n01, a);
  const double p_b = boost::math::cdf(n01, b);
  const double u = p_a + (p_b - p_a) * uniform01(rng);
  return std::clamp(boost::math::quantile(n01, u), a, b);
}

// Sum of logs of factors in [0, 1], taking one log per run of factors
// instead of one per factor.
class LogProduct {
 public:
  void mul(double x) {
    if (x < 1e-100) {
      log_ += std::log(x);
      return;
    }
    acc_ *= x;
    if (acc_ < 1e-200) {
      log_ += std::log(acc_);
      acc_ = 1.0;
    }
  }
  double value() const { return log_ + std::log(acc_); }

 private:
  double acc_ = 1.0;
  double log_ = 0.0;
};

double truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  double x = mean + sd * truncated_standard_normal(rng, (lo - mean) / sd, (hi - mean) / sd);
  // Keep strictly inside the open support.
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------

void ChainConfig::validate() const {
  if (iterations == 0) throw InvalidInput("iterations must be positive");
  if (burn_in >= iterations) throw InvalidInput("burn_in must be smaller than iterations");
  if (thin == 0) throw InvalidInput("thin must be >= 1");
  if (components == 0) throw InvalidInput("number of mixture components must be >= 1");
}

ModelState init_state(const RegressionSample& data, const ChainConfig& config,
                      std::uint64_t seed) {
  config.validate();
  if (data.size() == 0) throw InvalidInput("init_state: empty regression sample");
  const LsEstimate ls = fit_ls(data);
  Rng rng(seed);

  ModelState s;
  s.c = ls.c;
  s.d = std::clamp(ls.d, config.prior.d_lower + kInteriorGap, config.prior.d_upper - kInteriorGap);

  const std::size_t m = data.size();
  double mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) mean += residual(data.responses[j], data.regressors[j], s);
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double r = residual(data.responses[j], data.regressors[j], s) - mean;
    var += r * r;
  }
  var /= static_cast<double>(m);
  const double sd = std::sqrt(std::max(var, 1e-8));

  const std::size_t H = config.components;
  s.atoms.resize(H);
  for (auto& a : s.atoms) {
    a.pi = 0.5;
    a.mu = 0.5 * sd * standard_normal(rng);
    a.sigma1 = sd;
    a.sigma2 = sd;
  }
  s.sigma2_theta = sd * sd;

  StickState& st = s.sticks;
  st.kind = config.kernel;
  st.a = 1.0;
  st.b = 1.0;
  st.knot_lo = 2.0 * std::numbers::pi / static_cast<double>(data.n);
  st.knot_hi = *std::max_element(data.frequencies.begin(), data.frequencies.end());
  if (!(st.knot_hi > st.knot_lo)) st.knot_hi = st.knot_lo * (1.0 + 1e-9) + 1e-12;
  st.v.assign(H, 0.5);
  st.knots.resize(H);
  for (std::size_t h = 0; h < H; ++h) {
    st.knots[h] = st.knot_lo + (static_cast<double>(h) + 0.5) / static_cast<double>(H) *
                                   (st.knot_hi - st.knot_lo);
  }
  st.xi = 0.5 * (st.knot_hi - st.knot_lo);
  s.nu = 0.5;

  s.alloc.assign(m, 0);
  s.comp.assign(m, 0);
  return s;
}

// ---------------------------------------------------------------------------

GibbsSampler::GibbsSampler(const RegressionSample& data, ChainConfig config, ModelState initial,
                           std::uint64_t seed)
    : data_(data), config_(std::move(config)), state_(std::move(initial)), rng_(seed) {
  config_.validate();
  validate(state_, data_.size());
  const std::size_t H = state_.components();
  const ProposalScales& sc = config_.scales;
  stick_blocks_.assign(H, Adaptive{std::log(sc.stick)});
  knot_blocks_.assign(H, Adaptive{std::log(sc.knot)});
  pi_blocks_.assign(H, Adaptive{std::log(sc.pi)});
  xi_block_ = Adaptive{std::log(sc.xi)};
  nu_block_ = Adaptive{std::log(sc.nu)};
  a_block_ = Adaptive{std::log(sc.hyper)};
  b_block_ = Adaptive{std::log(sc.hyper)};
  refresh_weights();
  regroup();
}

void GibbsSampler::set_state(ModelState state) {
  validate(state, data_.size());
  state_ = std::move(state);
  refresh_weights();
  regroup();
}

void GibbsSampler::refresh_weights() {
  const std::size_t H = state_.components();
  const std::size_t m = data_.size();
  const StickState& st = state_.sticks;
  weights_.resize(m * H);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t h = 0; h < H; ++h) {
      weights_[j * H + h] = kernel_weight(data_.frequencies[j], st.knots[h], st.xi, st.kind);
    }
  }
}

void GibbsSampler::regroup() {
  members_.assign(state_.components(), {});
  for (std::size_t j = 0; j < state_.alloc.size(); ++j) members_[state_.alloc[j]].push_back(j);
}

template <class LogTarget>
double GibbsSampler::rw_step(double z, LogTarget&& log_target, Adaptive& block) {
  return rw_step(z, log_target(z), log_target, block);
}

template <class LogTarget>
double GibbsSampler::rw_step(double z, double current, LogTarget&& log_target, Adaptive& block) {
  const double proposal = z + std::exp(block.log_scale) * standard_normal(rng_);
  const double candidate = log_target(proposal);
  double log_ratio = candidate - current;
  if (std::isnan(log_ratio)) log_ratio = kNegInf;
  const double accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  const bool accept = uniform01(rng_) < accept_prob;
  ++block.proposals;
  if (accept) ++block.accepts;
  if (adapting_) {
    const double gain = std::pow(static_cast<double>(adapt_steps_) + 1.0, -0.6);
    block.log_scale += gain * (accept_prob - config_.target_acceptance);
    block.log_scale = std::clamp(block.log_scale, -12.0, 5.0);
  }
  return accept ? proposal : z;
}

void GibbsSampler::reset_acceptance() {
  auto reset = [](Adaptive& a) { a.proposals = a.accepts = 0; };
  for (auto* v : {&stick_blocks_, &knot_blocks_, &pi_blocks_}) {
    for (auto& a : *v) reset(a);
  }
  for (auto* a : {&xi_block_, &nu_block_, &a_block_, &b_block_}) reset(*a);
}

std::map<std::string, double> GibbsSampler::acceptance_rates() const {
  auto rate = [](std::size_t acc, std::size_t prop) {
    return prop == 0 ? 0.0 : static_cast<double>(acc) / static_cast<double>(prop);
  };
  auto pooled = [&](const std::vector<Adaptive>& v) {
    std::size_t acc = 0, prop = 0;
    for (const auto& a : v) {
      acc += a.accepts;
      prop += a.proposals;
    }
    return rate(acc, prop);
  };
  return {{"stick", pooled(stick_blocks_)},
          {"knot", pooled(knot_blocks_)},
          {"pi", pooled(pi_blocks_)},
          {"xi", rate(xi_block_.accepts, xi_block_.proposals)},
          {"nu", rate(nu_block_.accepts, nu_block_.proposals)},
          {"a", rate(a_block_.accepts, a_block_.proposals)},
          {"b", rate(b_block_.accepts, b_block_.proposals)}};
}

// ---------------------------------------------------------------------------
// Allocations

std::vector<GibbsSampler::ComponentTerms> GibbsSampler::component_terms(const ModelState& s) {
  std::vector<ComponentTerms> out(s.components());
  for (std::size_t h = 0; h < out.size(); ++h) {
    const Atom& a = s.atoms[h];
    out[h].mean[0] = a.mu;
    out[h].mean[1] = a.mu2();
    out[h].half_precision[0] = 0.5 / (a.sigma1 * a.sigma1);
    out[h].half_precision[1] = 0.5 / (a.sigma2 * a.sigma2);
    out[h].log_coef[0] = std::log(a.pi) - std::log(a.sigma1);
    out[h].log_coef[1] = std::log1p(-a.pi) - std::log(a.sigma2);
  }
  return out;
}

void GibbsSampler::allocation_weights(std::size_t j, std::span<const ComponentTerms> terms,
                                      std::vector<double>& prob,
                                      std::vector<double>& stick) const {
  const std::size_t H = state_.components();
  const StickState& st = state_.sticks;
  const double u = residual(data_.responses[j], data_.regressors[j], state_);
  prob.resize(2 * H);
  stick.resize(H);

  // Fast path in probability space for the stick weights.
  double remaining = 1.0;
  double top = kNegInf;
  for (std::size_t h = 0; h < H; ++h) {
    if (h + 1 < H) {
      const double vw = st.v[h] * weights_[j * H + h];
      stick[h] = vw * remaining;
      remaining *= 1.0 - vw;
    } else {
      stick[h] = remaining;
    }
    for (int k = 0; k < 2; ++k) {
      const double z = u - terms[h].mean[k];
      const double e = terms[h].log_coef[k] - terms[h].half_precision[k] * z * z;
      prob[2 * h + k] = e;
      if (stick[h] > 0.0) top = std::max(top, e);
    }
  }
  double total = 0.0;
  if (std::isfinite(top)) {
    for (std::size_t h = 0; h < H; ++h) {
      for (int k = 0; k < 2; ++k) {
        double& q = prob[2 * h + k];
        q = stick[h] > 0.0 ? stick[h] * std::exp(q - top) : 0.0;
        total += q;
      }
    }
  }
  if (total > 1e-250 && std::isfinite(total)) {
    for (auto& q : prob) q /= total;
    return;
  }

  // Underflow: redo everything on the log scale.
  double log_remaining = 0.0;
  top = kNegInf;
  for (std::size_t h = 0; h < H; ++h) {
    double logp;
    if (h + 1 < H) {
      const double vw = st.v[h] * weights_[j * H + h];
      logp = vw > 0.0 ? std::log(vw) + log_remaining : kNegInf;
      log_remaining += std::log1p(-vw);
    } else {
      logp = log_remaining;
    }
    for (int k = 0; k < 2; ++k) {
      const double z = u - terms[h].mean[k];
      prob[2 * h + k] = logp + terms[h].log_coef[k] - terms[h].half_precision[k] * z * z;
      top = std::max(top, prob[2 * h + k]);
    }
  }
  if (!std::isfinite(top)) throw NumericError("allocation probabilities are all zero");
  total = 0.0;
  for (auto& q : prob) {
    q = std::exp(q - top);
    total += q;
  }
  for (auto& q : prob) q /= total;
}

std::vector<double> GibbsSampler::allocation_probabilities(std::size_t j) const {
  const std::vector<ComponentTerms> terms = component_terms(state_);
  std::vector<double> prob, stick;
  allocation_weights(j, terms, prob, stick);
  return prob;
}

void GibbsSampler::update_allocations() {
  const std::size_t m = data_.size();
  const std::vector<ComponentTerms> terms = component_terms(state_);
  std::vector<double> prob, stick;
  for (std::size_t j = 0; j < m; ++j) {
    allocation_weights(j, terms, prob, stick);
    double u = uniform01(rng_);
    std::size_t pick = prob.size() - 1;
    for (std::size_t i = 0; i < prob.size(); ++i) {
      if (u < prob[i]) {
        pick = i;
        break;
      }
      u -= prob[i];
    }
    // Rounding can leave u just above the cumulative total; the fallback must
    // not land on a zero-probability cell.
    while (prob[pick] == 0.0 && pick > 0) --pick;
    state_.alloc[j] = pick / 2;
    state_.comp[j] = static_cast<std::uint8_t>(pick % 2);
  }
  regroup();
}

// ---------------------------------------------------------------------------
// Atoms

GibbsSampler::InvGammaParams GibbsSampler::atom_variance_conditional(std::size_t h,
                                                                     int component) const {
  const Atom& a = state_.atoms[h];
  const double centre = component == 0 ? a.mu : a.mu2();
  double count = 0.0, ss = 0.0;
  for (std::size_t j : members_[h]) {
    if (state_.comp[j] != component) continue;
    const double r = residual(data_.responses[j], data_.regressors[j], state_) - centre;
    ss += r * r;
    count += 1.0;
  }
  return {config_.prior.atom_var_shape + 0.5 * count, config_.prior.atom_var_rate + 0.5 * ss};
}

void GibbsSampler::update_atoms() {
  const PriorConfig& prior = config_.prior;
  const std::size_t H = state_.components();
  for (std::size_t h = 0; h < H; ++h) {
    Atom& a = state_.atoms[h];
    if (members_[h].empty()) {
      a.pi = uniform01(rng_);
      a.mu = std::sqrt(state_.sigma2_theta) * standard_normal(rng_);
      a.sigma1 = std::sqrt(inv_gamma_draw(rng_, prior.atom_var_shape, prior.atom_var_rate));
      a.sigma2 = std::sqrt(inv_gamma_draw(rng_, prior.atom_var_shape, prior.atom_var_rate));
      continue;
    }

    double n1 = 0.0, n2 = 0.0, s1 = 0.0, s2 = 0.0, q2 = 0.0;
    for (std::size_t j : members_[h]) {
      const double r = residual(data_.responses[j], data_.regressors[j], state_);
      if (state_.comp[j] == 0) {
        n1 += 1.0;
        s1 += r;
      } else {
        n2 += 1.0;
        s2 += r;
        q2 += r * r;
      }
    }

    // pi on the logit scale; the second component's location moves with pi.
    {
      const double var2 = a.sigma2 * a.sigma2;
      const double mu = a.mu;
      auto target = [&](double z) {
        const double p = detail::inv_logit(z);
        if (!(p > 0.0 && p < 1.0)) return kNegInf;
        const double m2 = -mu * p / (1.0 - p);
        const double sq = q2 - 2.0 * m2 * s2 + n2 * m2 * m2;
        return (n1 + 1.0) * std::log(p) + (n2 + 1.0) * std::log1p(-p) - 0.5 * sq / var2;
      };
      a.pi = detail::inv_logit(rw_step(detail::logit(a.pi), target, pi_blocks_[h]));
      a.pi = std::clamp(a.pi, 1e-12, 1.0 - 1e-12);
    }

    // mu is conditionally Gaussian given pi: component two sees -kappa * mu.
    {
      const double kappa = a.pi / (1.0 - a.pi);
      const double v1 = a.sigma1 * a.sigma1;
      const double v2 = a.sigma2 * a.sigma2;
      const double precision = 1.0 / state_.sigma2_theta + n1 / v1 + n2 * kappa * kappa / v2;
      const double mean = (s1 / v1 - kappa * s2 / v2) / precision;
      a.mu = mean + standard_normal(rng_) / std::sqrt(precision);
    }

    for (int k = 0; k < 2; ++k) {
      const InvGammaParams ig = atom_variance_conditional(h, k);
      const double sd = std::sqrt(inv_gamma_draw(rng_, ig.shape, ig.rate));
      (k == 0 ? a.sigma1 : a.sigma2) = std::max(sd, 1e-150);
    }
  }
}

// ---------------------------------------------------------------------------
// Sticks, knots, bandwidth

double GibbsSampler::stick_log_conditional(std::size_t h, double v) const {
  if (!(v > 0.0 && v < 1.0)) return kNegInf;
  const std::size_t H = state_.components();
  const StickState& st = state_.sticks;
  double lp = (st.a - 1.0) * std::log(v) + (st.b - 1.0) * std::log1p(-v);
  lp += static_cast<double>(members_[h].size()) * std::log(v);
  LogProduct tail;
  for (std::size_t g = h + 1; g < H; ++g) {
    for (std::size_t j : members_[g]) tail.mul(1.0 - v * weights_[j * H + h]);
  }
  return lp + tail.value();
}

double GibbsSampler::knot_log_conditional(std::size_t h, double psi) const {
  const StickState& st = state_.sticks;
  if (!(psi >= st.knot_lo && psi <= st.knot_hi)) return kNegInf;
  const std::size_t H = state_.components();
  if (h + 1 == H) return 0.0;
  LogProduct p;
  for (std::size_t j : members_[h]) p.mul(kernel_weight(data_.frequencies[j], psi, st.xi, st.kind));
  for (std::size_t g = h + 1; g < H; ++g) {
    for (std::size_t j : members_[g]) {
      p.mul(1.0 - st.v[h] * kernel_weight(data_.frequencies[j], psi, st.xi, st.kind));
    }
  }
  return p.value();
}

double GibbsSampler::current_knot_log_conditional(std::size_t h) const {
  const std::size_t H = state_.components();
  if (h + 1 == H) return 0.0;
  const double v = state_.sticks.v[h];
  LogProduct p;
  for (std::size_t j : members_[h]) p.mul(weights_[j * H + h]);
  for (std::size_t g = h + 1; g < H; ++g) {
    for (std::size_t j : members_[g]) p.mul(1.0 - v * weights_[j * H + h]);
  }
  return p.value();
}

double GibbsSampler::allocation_log_weight_sum(std::span<const double> weights) const {
  const std::size_t H = state_.components();
  const StickState& st = state_.sticks;
  LogProduct p;
  for (std::size_t j = 0; j < state_.alloc.size(); ++j) {
    const std::size_t s = state_.alloc[j];
    const double* w = weights.data() + j * H;
    for (std::size_t l = 0; l < s; ++l) p.mul(1.0 - st.v[l] * w[l]);
    if (s + 1 < H) p.mul(st.v[s] * w[s]);
  }
  return p.value();
}

void GibbsSampler::update_sticks_knots_bandwidth() {
  const PriorConfig& prior = config_.prior;
  const std::size_t H = state_.components();
  const std::size_t m = data_.size();
  StickState& st = state_.sticks;

  for (std::size_t h = 0; h + 1 < H; ++h) {
    auto target = [&](double z) {
      const double v = detail::inv_logit(z);
      return stick_log_conditional(h, v) + std::log(v) + std::log1p(-v);
    };
    st.v[h] = std::clamp(detail::inv_logit(rw_step(detail::logit(st.v[h]), target, stick_blocks_[h])),
                         1e-12, 1.0 - 1e-12);
  }

  const double width = st.knot_hi - st.knot_lo;
  for (std::size_t h = 0; h < H; ++h) {
    const double before = st.knots[h];
    if (h + 1 == H) {
      st.knots[h] = st.knot_lo + width * uniform01(rng_);
    } else {
      auto target = [&](double z) { return knot_log_conditional(h, z); };
      // Scales are stored relative to the support width.
      Adaptive& block = knot_blocks_[h];
      block.log_scale += std::log(width);
      st.knots[h] = rw_step(st.knots[h], current_knot_log_conditional(h), target, block);
      block.log_scale -= std::log(width);
    }
    if (st.knots[h] == before) continue;
    for (std::size_t j = 0; j < m; ++j) {
      weights_[j * H + h] = kernel_weight(data_.frequencies[j], st.knots[h], st.xi, st.kind);
    }
  }

  // Bandwidth on the log scale; every kernel weight moves with it.
  {
    std::vector<double> trial(weights_.size());
    auto weights_for = [&](double xi) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t h = 0; h < H; ++h) {
          trial[j * H + h] = kernel_weight(data_.frequencies[j], st.knots[h], xi, st.kind);
        }
      }
    };
    const double rate = 0.5 * state_.nu * state_.nu;
    const double current_xi = st.xi;
    const double current =
        detail::log_inv_gamma_pdf(current_xi, prior.xi_shape, rate) + std::log(current_xi) +
        allocation_log_weight_sum(weights_);
    const double z = std::log(current_xi) + std::exp(xi_block_.log_scale) * standard_normal(rng_);
    const double xi_new = std::exp(z);
    double candidate = kNegInf;
    if (xi_new > 0.0 && std::isfinite(xi_new)) {
      weights_for(xi_new);
      candidate = detail::log_inv_gamma_pdf(xi_new, prior.xi_shape, rate) + z +
                  allocation_log_weight_sum(trial);
    }
    double log_ratio = candidate - current;
    if (std::isnan(log_ratio)) log_ratio = kNegInf;
    const double accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    ++xi_block_.proposals;
    if (uniform01(rng_) < accept_prob) {
      ++xi_block_.accepts;
      st.xi = xi_new;
      weights_.swap(trial);
    }
    if (adapting_) {
      const double gain = std::pow(static_cast<double>(adapt_steps_) + 1.0, -0.6);
      xi_block_.log_scale =
          std::clamp(xi_block_.log_scale + gain * (accept_prob - config_.target_acceptance), -12.0, 5.0);
    }
  }

  // nu | xi: density of xi under IG(shape, nu^2 / 2) times Unif(0,1).
  {
    const double xi = st.xi;
    auto target = [&](double z) {
      const double nu = detail::inv_logit(z);
      if (!(nu > 0.0 && nu < 1.0)) return kNegInf;
      return detail::log_inv_gamma_pdf(xi, prior.xi_shape, 0.5 * nu * nu) + std::log(nu) +
             std::log1p(-nu);
    };
    state_.nu = detail::inv_logit(rw_step(detail::logit(state_.nu), target, nu_block_));
  }

  // Shared Beta(a, b) hyperparameters of the sticks, Unif(0, ab_upper) priors.
  {
    const double upper = prior.ab_upper;
    double sum_log_v = 0.0, sum_log_1mv = 0.0;
    for (std::size_t h = 0; h + 1 < H; ++h) {
      sum_log_v += std::log(st.v[h]);
      sum_log_1mv += std::log1p(-st.v[h]);
    }
    const double count = static_cast<double>(H - 1);
    auto beta_sum = [&](double a, double b) {
      return count * (std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)) +
             (a - 1.0) * sum_log_v + (b - 1.0) * sum_log_1mv;
    };
    auto target_a = [&](double z) {
      const double a = upper * detail::inv_logit(z);
      if (!(a > 0.0 && a < upper)) return kNegInf;
      return beta_sum(a, st.b) + std::log(a) + std::log1p(-a / upper);
    };
    st.a = upper * detail::inv_logit(rw_step(detail::logit(st.a / upper), target_a, a_block_));
    auto target_b = [&](double z) {
      const double b = upper * detail::inv_logit(z);
      if (!(b > 0.0 && b < upper)) return kNegInf;
      return beta_sum(st.a, b) + std::log(b) + std::log1p(-b / upper);
    };
    st.b = upper * detail::inv_logit(rw_step(detail::logit(st.b / upper), target_b, b_block_));
  }

  // Base-measure variance: conjugate inverse-gamma.
  {
    double ss = 0.0;
    for (const Atom& a : state_.atoms) ss += a.mu * a.mu;
    state_.sigma2_theta = inv_gamma_draw(rng_, prior.base_var_shape + 0.5 * static_cast<double>(H),
                                         prior.base_var_rate + 0.5 * ss);
  }
}

// ---------------------------------------------------------------------------
// (c, d)

GibbsSampler::GaussianCd GibbsSampler::cd_conditional() const {
  double p_cc = 1.0 / config_.prior.c_variance, p_cd = 0.0, p_dd = 0.0;
  double b_c = 0.0, b_d = 0.0;
  for (std::size_t j = 0; j < data_.size(); ++j) {
    const Atom& a = state_.atoms[state_.alloc[j]];
    const bool first = state_.comp[j] == 0;
    const double centre = first ? a.mu : a.mu2();
    const double sd = first ? a.sigma1 : a.sigma2;
    const double w = 1.0 / (sd * sd);
    const double x = data_.regressors[j];
    const double z = data_.responses[j] - centre;
    p_cc += w;
    p_cd += w * x;
    p_dd += w * x * x;
    b_c += w * z;
    b_d += w * x * z;
  }
  const double det = p_cc * p_dd - p_cd * p_cd;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw NumericError("(c, d) conditional precision is singular");
  }
  GaussianCd g;
  g.var_c = p_dd / det;
  g.cov_cd = -p_cd / det;
  g.var_d = p_cc / det;
  g.mean = {g.var_c * b_c + g.cov_cd * b_d, g.cov_cd * b_c + g.var_d * b_d};
  return g;
}

void GibbsSampler::update_cd() {
  const GaussianCd g = cd_conditional();
  const double d = truncated_normal(rng_, g.mean[1], std::sqrt(g.var_d), config_.prior.d_lower,
                                    config_.prior.d_upper);
  const double c_mean = g.mean[0] + g.cov_cd / g.var_d * (d - g.mean[1]);
  const double c_var = std::max(g.var_c - g.cov_cd * g.cov_cd / g.var_d, 0.0);
  state_.d = d;
  state_.c = c_mean + std::sqrt(c_var) * standard_normal(rng_);
  if (!std::isfinite(state_.c)) throw NumericError("non-finite draw of c");
}

void GibbsSampler::sweep() {
  update_allocations();
  update_atoms();
  update_sticks_knots_bandwidth();
  update_cd();
  if (adapting_) ++adapt_steps_;
}

// ---------------------------------------------------------------------------

PosteriorDraws run_chain(const RegressionSample& data, const ChainConfig& config) {
  config.validate();
  GibbsSampler sampler(data, config, init_state(data, config, config.seed),
                       splitmix64(config.seed));
  sampler.set_adapting(config.adapt && config.burn_in > 0);

  PosteriorDraws out;
  out.seed = config.seed;
  const std::size_t keep = config.kept_draws();
  out.d.reserve(keep);
  out.c.reserve(keep);
  for (const char* name : {"xi", "nu", "a", "b", "sigma2_theta", "occupied"}) {
    out.traces[name].reserve(keep);
  }

  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (it == config.burn_in) {
      sampler.set_adapting(false);
      sampler.reset_acceptance();
    }
    try {
      sampler.sweep();
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (it < config.burn_in || (it - config.burn_in + 1) % config.thin != 0) continue;

    const ModelState& s = sampler.state();
    out.d.push_back(s.d);
    out.c.push_back(s.c);
    out.traces["xi"].push_back(s.sticks.xi);
    out.traces["nu"].push_back(s.nu);
    out.traces["a"].push_back(s.sticks.a);
    out.traces["b"].push_back(s.sticks.b);
    out.traces["sigma2_theta"].push_back(s.sigma2_theta);
    std::vector<bool> used(s.components(), false);
    for (std::size_t a : s.alloc) used[a] = true;
    out.traces["occupied"].push_back(static_cast<double>(std::count(used.begin(), used.end(), true)));
    if (config.store_states) out.states.push_back(s);
  }
  out.acceptance = sampler.acceptance_rates();
  return out;
}

}  // namespace lomem
