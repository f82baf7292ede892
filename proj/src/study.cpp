#include "lomem/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "lomem/arfima.hpp"
#include "lomem/error.hpp"
#include "lomem/rng.hpp"

namespace lomem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Estimate estimate_semiparametric(const TimeSeries& series, const EstimationOptions& opt,
                                 std::uint64_t seed) {
  const std::size_t m = opt.bandwidth != 0
                            ? opt.bandwidth
                            : semiparametric_bandwidth(series.size(), opt.bandwidth_exponent);
  const RegressionSample data =
      pooled_log_periodogram(periodogram(series), opt.pooling, opt.trim, m, opt.form);
  ChainConfig chain = opt.chain;
  chain.seed = seed;
  const PosteriorDraws draws = run_chain(data, chain);
  const PosteriorSummary s = summarize(draws);

  Estimate e;
  e.method = Method::Semiparametric;
  e.d_point = s.mean;
  e.lower = s.lower;
  e.upper = s.upper;
  e.m = m;
  e.pooling = opt.pooling;
  e.trim = opt.trim;
  e.extra["median"] = s.median;
  e.extra["map"] = s.map;
  e.extra["ess"] = s.ess;
  e.extra["draws"] = static_cast<double>(s.draws);
  e.extra["grid_points"] = static_cast<double>(data.size());
  double c_mean = 0.0;
  for (double c : draws.c) c_mean += c;
  e.extra["c_mean"] = c_mean / static_cast<double>(draws.c.size());
  for (const auto& [name, rate] : draws.acceptance) e.extra["accept_" + name] = rate;
  return e;
}

Estimate estimate_least_squares(const TimeSeries& series, const EstimationOptions& opt) {
  const std::optional<std::size_t> m =
      opt.ls_bandwidth != 0 ? std::optional<std::size_t>(opt.ls_bandwidth) : std::nullopt;
  const LsEstimate ls = estimate_ls(series, opt.ls_trim, opt.ls_pooling, m);
  Estimate e;
  e.method = Method::Ls;
  e.d_point = ls.d;
  e.lower = ls.lower;
  e.upper = ls.upper;
  e.m = ls.bandwidth;
  e.pooling = ls.pooling;
  e.trim = ls.trim;
  e.extra["se"] = ls.se;
  e.extra["c"] = ls.c;
  e.extra["grid_points"] = static_cast<double>(ls.points);
  return e;
}

Estimate estimate_parametric(const TimeSeries& series, const EstimationOptions& opt,
                             std::uint64_t seed) {
  ChainConfig chain = opt.chain;
  chain.seed = seed;
  const PosteriorDraws draws = run_param_chain(series, opt.param_order, chain);
  const PosteriorSummary s = summarize(draws);
  Estimate e;
  e.method = Method::Parametric;
  e.d_point = s.mean;
  e.lower = s.lower;
  e.upper = s.upper;
  e.m = series.size() / 2;
  e.pooling = 1;
  e.trim = 0;
  e.extra["median"] = s.median;
  e.extra["map"] = s.map;
  e.extra["ess"] = s.ess;
  for (const auto& [name, trace] : draws.traces) {
    if (opt.param_order == ArfimaOrder::Fractional && name != "sigma2") continue;
    double mean = 0.0;
    for (double v : trace) mean += v;
    e.extra[name + "_mean"] = mean / static_cast<double>(trace.size());
  }
  for (const auto& [name, rate] : draws.acceptance) e.extra["accept_" + name] = rate;
  return e;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Semiparametric: return "semiparametric";
    case Method::Ls: return "ls";
    case Method::Parametric: return "parametric";
  }
  return "ls";
}

Method parse_method(std::string_view name) {
  if (name == "semiparametric") return Method::Semiparametric;
  if (name == "ls") return Method::Ls;
  if (name == "parametric") return Method::Parametric;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

std::size_t semiparametric_bandwidth(std::size_t n, double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw InvalidInput("bandwidth exponent must lie in (0, 1]");
  }
  const auto m = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(n), exponent) + 1e-9));
  return std::clamp<std::size_t>(m, std::min<std::size_t>(8, n / 2), n / 2);
}

Estimate estimate(const TimeSeries& series, Method method, const EstimationOptions& options,
                  std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Estimate e;
  switch (method) {
    case Method::Semiparametric: e = estimate_semiparametric(series, options, seed); break;
    case Method::Ls: e = estimate_least_squares(series, options); break;
    case Method::Parametric: e = estimate_parametric(series, options, seed); break;
  }
  e.n = series.size();
  e.seed = seed;
  e.runtime_seconds = seconds_since(start);
  return e;
}

std::vector<Scenario> default_scenarios() {
  const double ds[] = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.49};
  const std::pair<double, double> arma[] = {
      {0.0, 0.0}, {0.8, 0.1}, {0.5, 0.1}, {0.1, 0.5}, {0.1, 0.8}};
  std::vector<Scenario> out;
  for (const auto& [phi, theta] : arma) {
    for (double d : ds) out.push_back({d, phi, theta});
  }
  return out;
}

void StudySpec::validate() const {
  if (scenarios.empty()) throw InvalidInput("study: no scenarios");
  if (replicates == 0) throw InvalidInput("study: replicates must be >= 1");
  if (methods.empty()) throw InvalidInput("study: no methods");
  if (n < 16) throw InvalidInput("study: series length must be >= 16");
  for (const Scenario& s : scenarios) {
    if (!(s.d > -1.0 && s.d < 0.5) || !(std::abs(s.phi) < 1.0) || !(std::abs(s.theta) < 1.0)) {
      throw InvalidInput("study: scenario outside the stationary, invertible region");
    }
  }
  options.chain.validate();
}

std::vector<StudyCell> aggregate(const StudySpec& spec,
                                 const std::vector<ReplicateRecord>& records) {
  const std::size_t methods = spec.methods.size();
  std::vector<StudyCell> cells(spec.scenarios.size() * methods);
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < methods; ++k) {
      cells[s * methods + k].scenario = spec.scenarios[s];
      cells[s * methods + k].method = spec.methods[k];
    }
  }
  std::vector<std::size_t> covered(cells.size(), 0);
  for (const ReplicateRecord& r : records) {
    const auto it = std::find(spec.methods.begin(), spec.methods.end(), r.method);
    if (r.scenario >= spec.scenarios.size() || it == spec.methods.end()) {
      throw InvalidInput("aggregate: record does not belong to the study");
    }
    const std::size_t idx =
        r.scenario * methods + static_cast<std::size_t>(it - spec.methods.begin());
    StudyCell& cell = cells[idx];
    if (!r.ok) {
      ++cell.failures;
      continue;
    }
    cell.mean_estimate += r.d_point;
    cell.ci_lo += r.lower;
    cell.ci_hi += r.upper;
    const double d = spec.scenarios[r.scenario].d;
    covered[idx] += r.lower <= d && d <= r.upper ? 1 : 0;
    ++cell.n_replicates;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    StudyCell& cell = cells[i];
    if (cell.n_replicates == 0) continue;
    const double k = static_cast<double>(cell.n_replicates);
    cell.mean_estimate /= k;
    cell.ci_lo /= k;
    cell.ci_hi /= k;
    cell.coverage = static_cast<double>(covered[i]) / k;
  }
  return cells;
}

StudyResult run_study(const StudySpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t methods = spec.methods.size();
  const std::size_t tasks = spec.scenarios.size() * spec.replicates;
  std::vector<ReplicateRecord> records(tasks * methods);

  auto run_task = [&](std::size_t task) {
    const std::size_t s = task / spec.replicates;
    const std::size_t r = task % spec.replicates;
    const Scenario& sc = spec.scenarios[s];
    const std::uint64_t seed = derive_seed(spec.base_seed, s, r);
    std::optional<TimeSeries> series;
    std::string sim_error;
    try {
      series = simulate(ArfimaParams{sc.d, sc.phi, sc.theta, 1.0}, spec.n, seed);
    } catch (const Error& e) {
      sim_error = e.what();
    }
    for (std::size_t k = 0; k < methods; ++k) {
      ReplicateRecord& rec = records[task * methods + k];
      rec.scenario = s;
      rec.replicate = r;
      rec.method = spec.methods[k];
      rec.seed = seed;
      if (!series) {
        rec.error = sim_error;
        continue;
      }
      try {
        const Estimate e =
            estimate(*series, spec.methods[k], spec.options, splitmix64(seed + k + 1));
        rec.ok = std::isfinite(e.d_point);
        rec.d_point = e.d_point;
        rec.lower = e.lower;
        rec.upper = e.upper;
        rec.covered = e.lower <= sc.d && sc.d <= e.upper;
        if (!rec.ok) rec.error = "non-finite estimate";
      } catch (const Error& e) {
        rec.error = e.what();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(spec.workers, 1, tasks);
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
          try {
            run_task(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  const auto failed = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok; }));
  if (10 * failed > records.size()) {
    const auto first = std::find_if(records.begin(), records.end(),
                                    [](const auto& r) { return !r.ok; });
    throw NumericError("study: " + std::to_string(failed) + " of " +
                       std::to_string(records.size()) + " runs failed; first: " + first->error);
  }

  StudyResult result;
  result.cells = aggregate(spec, records);
  result.records = std::move(records);
  result.runtime_seconds = seconds_since(start);
  return result;
}

}  // namespace lomem
