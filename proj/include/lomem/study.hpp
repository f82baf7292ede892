#ifndef LOMEM_STUDY_HPP
#define LOMEM_STUDY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lomem/baselines.hpp"
#include "lomem/sampler.hpp"
#include "lomem/spectral.hpp"

namespace lomem {

enum class Method { Semiparametric, Ls, Parametric };

std::string to_string(Method m);
/// "semiparametric", "ls", "parametric"
Method parse_method(std::string_view name);

struct EstimationOptions {
  ChainConfig chain;
  // Semiparametric frequency grid. bandwidth = 0 selects floor(n^exponent).
  std::size_t trim = 1;
  std::size_t pooling = 1;
  std::size_t bandwidth = 0;
  double bandwidth_exponent = 0.6;
  RegressorForm form = RegressorForm::SinSquared;
  // Least squares. bandwidth = 0 selects default_bandwidth(n).
  std::size_t ls_trim = 1;
  std::size_t ls_pooling = 1;
  std::size_t ls_bandwidth = 0;
  ArfimaOrder param_order = ArfimaOrder::Arma11;
};

/// floor(n^exponent), clamped to [8, floor(n/2)].
std::size_t semiparametric_bandwidth(std::size_t n, double exponent);

struct Estimate {
  Method method = Method::Ls;
  double d_point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t pooling = 1;
  std::size_t trim = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::map<std::string, double> extra;
};

/// Point estimate and 95% interval for d. Bayesian methods report the
/// posterior mean and equal-tailed credible interval; least squares the
/// estimate and the normal-theory interval. `seed` overrides the chain seed.
Estimate estimate(const TimeSeries& series, Method method, const EstimationOptions& options,
                  std::uint64_t seed);

struct Scenario {
  double d = 0.0;
  double phi = 0.0;
  double theta = 0.0;

  bool operator==(const Scenario&) const = default;
};

/// d in {0.05, 0.10, ..., 0.45, 0.49} crossed with (phi, theta) in
/// {(0,0), (0.8,0.1), (0.5,0.1), (0.1,0.5), (0.1,0.8)}; 50 scenarios.
std::vector<Scenario> default_scenarios();

struct StudySpec {
  std::vector<Scenario> scenarios = default_scenarios();
  std::size_t replicates = 50;
  std::size_t n = 10000;
  std::vector<Method> methods = {Method::Semiparametric, Method::Ls, Method::Parametric};
  std::uint64_t base_seed = 1;
  std::size_t workers = 1;
  EstimationOptions options;

  /// Throws InvalidInput on an empty grid, replicates = 0, no methods or a
  /// scenario outside d in (-1, 1/2), |phi| < 1, |theta| < 1.
  void validate() const;
};

struct ReplicateRecord {
  std::size_t scenario = 0;
  std::size_t replicate = 0;
  Method method = Method::Ls;
  std::uint64_t seed = 0;  ///< simulation seed
  bool ok = false;
  double d_point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool covered = false;
  std::string error;
};

struct StudyCell {
  Scenario scenario;
  Method method = Method::Ls;
  double mean_estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double coverage = 0.0;
  std::size_t n_replicates = 0;  ///< successful replicates
  std::size_t failures = 0;
};

struct StudyResult {
  std::vector<StudyCell> cells;        ///< scenario-major, then method order of StudySpec::methods
  std::vector<ReplicateRecord> records;  ///< (scenario, replicate, method) order
  double runtime_seconds = 0.0;
};

/// Deterministic fold of replicate records into per (scenario, method) cells.
/// Coverage counts the intervals containing the scenario's d.
std::vector<StudyCell> aggregate(const StudySpec& spec, const std::vector<ReplicateRecord>& records);

/// Simulates every (scenario, replicate) with seed derive_seed(base_seed,
/// scenario, replicate), applies every method and aggregates. Replicates run
/// on up to `workers` threads; the result does not depend on the worker
/// count. Individual failures are recorded; throws NumericError when more
/// than 10% of the runs fail.
StudyResult run_study(const StudySpec& spec);

}  // namespace lomem

#endif  // LOMEM_STUDY_HPP
