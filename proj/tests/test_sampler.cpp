#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/inverse_gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lomem/arfima.hpp"
#include "lomem/error.hpp"
#include "lomem/sampler.hpp"
#include "lomem/study.hpp"
#include "support/properties.hpp"

using namespace lomem;

namespace {

constexpr double kPi = std::numbers::pi;

RegressionSample linear_sample(std::size_t n, std::size_t m, double c, double d) {
  RegressionSample r;
  r.n = n;
  r.bandwidth = m;
  for (std::size_t j = 1; j <= m; ++j) {
    const double lam = 2 * kPi * static_cast<double>(j) / static_cast<double>(n);
    r.frequencies.push_back(lam);
    r.regressors.push_back(regressor(lam));
    r.responses.push_back(c + d * r.regressors.back());
    r.indices.push_back(j);
  }
  return r;
}

ChainConfig short_chain(std::size_t components = 5) {
  ChainConfig c;
  c.iterations = 600;
  c.burn_in = 300;
  c.thin = 1;
  c.components = components;
  return c;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST(ChainConfig, Validation) {
  ChainConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.kept_draws(), 2000u);
  c.burn_in = c.iterations;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = ChainConfig{};
  c.thin = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = ChainConfig{};
  c.components = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(InitState, NoiselessDataGivesExactLeastSquares) {
  const RegressionSample data = linear_sample(1000, 100, 1.0, 0.3);
  const ModelState s = init_state(data, ChainConfig{}, 7);
  EXPECT_NEAR(s.c, 1.0, 1e-8);
  EXPECT_NEAR(s.d, 0.3, 1e-8);
  EXPECT_EQ(s.components(), 30u);
  EXPECT_NO_THROW(validate(s, data.size()));
  for (double k : s.sticks.knots) {
    EXPECT_GE(k, s.sticks.knot_lo);
    EXPECT_LE(k, s.sticks.knot_hi);
  }
  EXPECT_DOUBLE_EQ(s.sticks.knot_lo, 2 * kPi / 1000);
  EXPECT_DOUBLE_EQ(s.sticks.knot_hi, data.frequencies.back());
}

TEST(InitState, DeterministicInSeed) {
  const RegressionSample data = linear_sample(1000, 100, 1.0, 0.3);
  const ModelState a = init_state(data, ChainConfig{}, 11);
  const ModelState b = init_state(data, ChainConfig{}, 11);
  ASSERT_EQ(a.atoms.size(), b.atoms.size());
  for (std::size_t h = 0; h < a.atoms.size(); ++h) EXPECT_EQ(a.atoms[h].mu, b.atoms[h].mu);
  EXPECT_EQ(a.sticks.knots, b.sticks.knots);
}

TEST(InitState, ClampsSlopeIntoSupport) {
  const ModelState hi = init_state(linear_sample(1000, 100, 0.0, 0.6), ChainConfig{}, 1);
  EXPECT_NEAR(hi.d, 0.5 - 1e-3, 1e-12);
  const ModelState lo = init_state(linear_sample(1000, 100, 0.0, -1.3), ChainConfig{}, 1);
  EXPECT_NEAR(lo.d, -1.0 + 1e-3, 1e-12);
}

TEST(InitState, ConstantRegressorRejected) {
  RegressionSample data = linear_sample(1000, 10, 0, 0);
  for (auto& x : data.regressors) x = 2.0;
  EXPECT_THROW(init_state(data, ChainConfig{}, 1), InvalidInput);
}

TEST(Allocations, SingleComponentTakesEverything) {
  RegressionSample data = linear_sample(512, 40, 0.5, 0.2);
  std::mt19937_64 g(3);
  for (auto& y : data.responses) y += std::normal_distribution<double>()(g);
  ChainConfig config = short_chain(1);
  GibbsSampler sampler(data, config, init_state(data, config, 1), 2);
  for (int i = 0; i < 20; ++i) {
    sampler.update_allocations();
    for (std::size_t a : sampler.state().alloc) EXPECT_EQ(a, 0u);
  }
}

TEST(Allocations, SeparatedAtomsClaimTheirResiduals) {
  RegressionSample data = linear_sample(512, 10, 0.0, 0.0);
  ChainConfig config = short_chain(2);
  ModelState s = init_state(data, config, 1);
  s.c = 0;
  s.d = 0;
  s.atoms[0] = {0.5, 5.0, 0.5, 0.5};  // components at +5 and -5
  s.atoms[1] = {0.5, 1.0, 0.5, 0.5};  // components at +1 and -1
  s.sticks.v = {0.5, 0.5};
  for (auto& y : data.responses) y = 5.0;
  GibbsSampler sampler(data, config, s, 3);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto p = sampler.allocation_probabilities(j);
    EXPECT_GT(p[0], 0.999);
    // Closed-form odds of the nearest competitor, atom 1 component 0.
    const double w0 = mixture_weights(s.sticks, data.frequencies[j])[0];
    const double w1 = mixture_weights(s.sticks, data.frequencies[j])[1];
    const double log_odds = std::log(w1 / w0) - 0.5 * (4.0 / 0.5) * (4.0 / 0.5);
    EXPECT_NEAR(std::log(p[2] / p[0]), log_odds, 1e-6 * std::abs(log_odds));
  }
  sampler.update_allocations();
  for (std::size_t j = 0; j < data.size(); ++j) {
    EXPECT_EQ(sampler.state().alloc[j], 0u);
    EXPECT_EQ(sampler.state().comp[j], 0u);
  }
}

TEST(UpdateCd, ConcentratesOnNoiselessData) {
  RegressionSample data = linear_sample(2048, 300, 1.0, 0.3);
  ChainConfig config = short_chain(1);
  ModelState s = init_state(data, config, 1);
  s.atoms[0] = {0.5, 0.0, 1e-4, 1e-4};
  GibbsSampler sampler(data, config, s, 4);
  std::vector<double> c, d;
  for (int i = 0; i < 500; ++i) {
    sampler.update_cd();
    c.push_back(sampler.state().c);
    d.push_back(sampler.state().d);
  }
  EXPECT_LT(sd_of(d), 1e-3);
  EXPECT_LT(sd_of(c), 1e-3);
  EXPECT_NEAR(mean_of(d), 0.3, 1e-4);
  EXPECT_NEAR(mean_of(c), 1.0, 1e-4);
}

TEST(UpdateCd, DrawsMatchGaussianConditional) {
  RegressionSample data = linear_sample(256, 30, 0.2, 0.1);
  std::mt19937_64 g(5);
  for (auto& y : data.responses) y += 0.5 * std::normal_distribution<double>()(g);
  ChainConfig config = short_chain(1);
  ModelState s = init_state(data, config, 2);
  s.atoms[0] = {0.5, 0.0, 0.5, 0.5};
  GibbsSampler sampler(data, config, s, 5);
  const auto cd = sampler.cd_conditional();
  ASSERT_GT(cd.mean[1] - 6 * std::sqrt(cd.var_d), -1.0);
  ASSERT_LT(cd.mean[1] + 6 * std::sqrt(cd.var_d), 0.5);
  std::vector<double> c, d;
  for (int i = 0; i < 20000; ++i) {
    sampler.update_cd();
    c.push_back(sampler.state().c);
    d.push_back(sampler.state().d);
  }
  EXPECT_NEAR(mean_of(d), cd.mean[1], 4 * std::sqrt(cd.var_d / 20000));
  EXPECT_NEAR(mean_of(c), cd.mean[0], 4 * std::sqrt(cd.var_c / 20000));
  EXPECT_NEAR(sd_of(d) / std::sqrt(cd.var_d), 1.0, 0.03);
  EXPECT_NEAR(sd_of(c) / std::sqrt(cd.var_c), 1.0, 0.03);
}

TEST(UpdateCd, TruncatesToPriorSupport) {
  // Data with slope 0.8: the untruncated conditional sits outside (-1, 1/2).
  RegressionSample data = linear_sample(2048, 200, 0.0, 0.8);
  ChainConfig config = short_chain(1);
  GibbsSampler sampler(data, config, init_state(data, config, 1), 6);
  for (int i = 0; i < 200; ++i) {
    sampler.update_cd();
    EXPECT_GT(sampler.state().d, -1.0);
    EXPECT_LT(sampler.state().d, 0.5);
  }
}

TEST(UpdateAtoms, EmptyAtomIsRefreshedFromPrior) {
  RegressionSample data = linear_sample(512, 20, 0.0, 0.0);
  ChainConfig config = short_chain(2);
  ModelState s = init_state(data, config, 1);
  s.sigma2_theta = 2.0;
  GibbsSampler sampler(data, config, s, 7);  // everything on atom 0
  const std::size_t draws = 10000;
  std::vector<double> pi, mu, var1;
  for (std::size_t i = 0; i < draws; ++i) {
    sampler.update_atoms();
    const Atom& a = sampler.state().atoms[1];
    pi.push_back(a.pi);
    mu.push_back(a.mu);
    var1.push_back(a.sigma1 * a.sigma1);
  }
  const double se = std::sqrt(1.0 / draws);
  EXPECT_NEAR(mean_of(pi), 0.5, 3 * std::sqrt(1.0 / 12) * se);
  EXPECT_NEAR(mean_of(mu), 0.0, 3 * std::sqrt(2.0) * se);
  EXPECT_NEAR(sd_of(mu) * sd_of(mu), 2.0, 3 * 2.0 * std::sqrt(2.0) * se);
  // IG(2, 1) has no variance; compare the fraction below its median instead.
  const double med = boost::math::median(boost::math::inverse_gamma_distribution<double>(2.0, 1.0));
  const double below = static_cast<double>(std::count_if(var1.begin(), var1.end(),
                                                          [&](double v) { return v < med; })) /
                       static_cast<double>(draws);
  EXPECT_NEAR(below, 0.5, 3 * 0.5 * se);
}

TEST(Sticks, OutsideUnitIntervalHasZeroDensity) {
  RegressionSample data = linear_sample(512, 20, 0.0, 0.2);
  ChainConfig config = short_chain(4);
  GibbsSampler sampler(data, config, init_state(data, config, 1), 8);
  for (double v : {-0.1, 0.0, 1.0, 1.5}) {
    EXPECT_EQ(sampler.stick_log_conditional(0, v), -std::numeric_limits<double>::infinity());
  }
  EXPECT_TRUE(std::isfinite(sampler.stick_log_conditional(0, 0.3)));
  const auto& st = sampler.state().sticks;
  EXPECT_EQ(sampler.knot_log_conditional(0, st.knot_lo * 0.5), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(sampler.knot_log_conditional(0, st.knot_hi * 1.01), -std::numeric_limits<double>::infinity());
}

TEST(RunChain, DrawsRespectSupportsAndAreDeterministic) {
  const TimeSeries x = simulate({0.3, 0, 0, 1}, 2048, 12);
  const RegressionSample data = pooled_log_periodogram(periodogram(x), 1, 1, 200);
  ChainConfig config = short_chain(8);
  config.store_states = true;
  config.seed = 99;
  const PosteriorDraws a = run_chain(data, config);
  const PosteriorDraws b = run_chain(data, config);
  ASSERT_EQ(a.d.size(), config.kept_draws());
  EXPECT_EQ(a.d, b.d);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.traces, b.traces);
  config.seed = 100;
  EXPECT_NE(run_chain(data, config).d, a.d);

  for (const ModelState& s : a.states) {
    EXPECT_GT(s.d, -1.0);
    EXPECT_LT(s.d, 0.5);
    for (std::size_t h = 0; h < s.components(); ++h) {
      EXPECT_GT(s.atoms[h].sigma1, 0.0);
      EXPECT_GT(s.atoms[h].sigma2, 0.0);
      if (h + 1 < s.components()) {
        EXPECT_GT(s.sticks.v[h], 0.0);
        EXPECT_LT(s.sticks.v[h], 1.0);
      }
      EXPECT_GE(s.sticks.knots[h], s.sticks.knot_lo);
      EXPECT_LE(s.sticks.knots[h], s.sticks.knot_hi);
    }
  }
  for (const auto& [name, rate] : a.acceptance) {
    EXPECT_GE(rate, 0.0) << name;
    EXPECT_LE(rate, 1.0) << name;
  }
}

TEST(RunChain, NoiselessDataGivesNarrowInterval) {
  const RegressionSample data = linear_sample(8192, 4000, 0.7, 0.3);
  ChainConfig config;
  config.iterations = 1500;
  config.burn_in = 500;
  config.thin = 1;
  config.components = 10;
  const PosteriorSummary s = summarize(run_chain(data, config));
  EXPECT_LT(s.upper - s.lower, 1e-2);
  EXPECT_NEAR(s.mean, 0.3, 5e-3);
}

TEST(RunChain, FractionalNoiseQuarter) {
  // Defaults end to end: 20000 iterations, H = 30, m = floor(n^0.6).
  const TimeSeries x = simulate({0.25, 0, 0, 1}, 10000, 2501);
  const Estimate e = estimate(x, Method::Semiparametric, EstimationOptions{}, 1);
  EXPECT_GT(e.d_point, 0.17);
  EXPECT_LT(e.d_point, 0.33);
  EXPECT_LE(e.lower, e.d_point);
  EXPECT_GE(e.upper, e.d_point);
}

TEST(Summarize, ConstantDraws) {
  const std::vector<double> draws(500, 0.3);
  const PosteriorSummary s = summarize(draws);
  EXPECT_DOUBLE_EQ(s.mean, 0.3);
  EXPECT_DOUBLE_EQ(s.median, 0.3);
  EXPECT_DOUBLE_EQ(s.map, 0.3);
  EXPECT_DOUBLE_EQ(s.lower, 0.3);
  EXPECT_DOUBLE_EQ(s.upper, 0.3);
  EXPECT_THROW(summarize(std::vector<double>(99, 0.3)), InvalidInput);
}

TEST(Summarize, QuantilesAreEmpiricalType7) {
  std::mt19937_64 g(6);
  std::vector<double> draws(1237);
  for (auto& v : draws) v = std::normal_distribution<double>(0.2, 0.05)(g);
  const PosteriorSummary s = summarize(draws);
  auto sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    const double h = (static_cast<double>(sorted.size()) - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  };
  EXPECT_DOUBLE_EQ(s.lower, q(0.025));
  EXPECT_DOUBLE_EQ(s.upper, q(0.975));
  EXPECT_DOUBLE_EQ(s.median, q(0.5));
  EXPECT_NEAR(s.map, 0.2, 0.01);
  EXPECT_EQ(s.draws, draws.size());
}

TEST(Summarize, IidEffectiveSampleSize) {
  std::mt19937_64 g(8);
  std::vector<double> draws(10000);
  for (auto& v : draws) v = std::normal_distribution<double>()(g);
  EXPECT_NEAR(effective_sample_size(draws) / 10000.0, 1.0, 0.1);
  // AR(1) with coefficient 0.9: ESS about n (1 - 0.9) / (1 + 0.9).
  std::vector<double> ar(20000);
  double prev = 0;
  for (auto& v : ar) v = prev = 0.9 * prev + std::normal_distribution<double>()(g);
  EXPECT_NEAR(effective_sample_size(ar) / (20000.0 * 0.1 / 1.9), 1.0, 0.25);
}

TEST(Properties, GibbsConditionalsMatchClosedForms) {
  const props::Check c = props::gibbs_conditionals_property();
  EXPECT_TRUE(c.pass) << c.detail;
}

TEST(Properties, GewekeJointDistribution) {
  const props::Check c = props::geweke_property(5000);
  EXPECT_TRUE(c.pass) << c.detail;
  std::cout << "  " << c.detail << "\n";
}

TEST(Properties, PosteriorConcentratesAsBandwidthGrows) {
  const props::Check c = props::concentration_property(10);
  EXPECT_TRUE(c.pass) << c.detail;
  std::cout << "  " << c.detail << "\n";
}
