// Acceptance run: one PASS / FAIL / SKIP line per criterion.
// Usage: acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lomem/arfima.hpp"
#include "lomem/baselines.hpp"
#include "lomem/config.hpp"
#include "lomem/error.hpp"
#include "lomem/io.hpp"
#include "lomem/report.hpp"
#include "lomem/study.hpp"
#include "support/properties.hpp"

using namespace lomem;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

const StudyCell& cell(const StudyResult& r, const Scenario& s, Method m) {
  for (const StudyCell& c : r.cells) {
    if (c.scenario == s && c.method == m) return c;
  }
  throw Error("missing study cell");
}

StudySpec spec_for(std::vector<Scenario> scenarios, std::size_t reps, std::vector<Method> methods,
                   std::uint64_t seed) {
  StudySpec spec;
  spec.scenarios = std::move(scenarios);
  spec.replicates = reps;
  spec.n = 10000;
  spec.methods = std::move(methods);
  spec.base_seed = seed;
  spec.workers = workers();
  return spec;
}

const double kTableD[] = {0.1, 0.25, 0.4};

// Shared by criteria 1 and 2: (0, d, 0) with both estimators, 5 replicates.
const StudyResult& fractional_study() {
  static const StudyResult r = [] {
    std::vector<Scenario> s;
    for (double d : kTableD) s.push_back({d, 0, 0});
    return run_study(spec_for(s, 5, {Method::Semiparametric, Method::Ls}, 1));
  }();
  return r;
}

Outcome criterion1() {
  const StudyResult& r = fractional_study();
  Outcome o{Verdict::Pass, "semiparametric mean posterior mean, 5 reps, n=10000:"};
  for (double d : kTableD) {
    const StudyCell& c = cell(r, {d, 0, 0}, Method::Semiparametric);
    const bool ok = c.failures == 0 && std::abs(c.mean_estimate - d) <= 0.08;
    if (!ok) o.verdict = Verdict::Fail;
    o.detail += fmt(" d=%.2f -> %.4f (%.4f, %.4f)%s", d, c.mean_estimate, c.ci_lo, c.ci_hi,
                    ok ? "" : " out of band");
  }
  return o;
}

Outcome criterion2() {
  const StudyResult& r = fractional_study();
  std::vector<Scenario> biased;
  for (double d : kTableD) biased.push_back({d, 0.8, 0.1});
  const StudyResult b = run_study(spec_for(biased, 5, {Method::Ls}, 1));
  Outcome o{Verdict::Pass, fmt("LS, m=%zu:", default_bandwidth(10000))};
  for (double d : kTableD) {
    const StudyCell& c = cell(r, {d, 0, 0}, Method::Ls);
    const bool ok = c.failures == 0 && std::abs(c.mean_estimate - d) <= 0.08;
    if (!ok) o.verdict = Verdict::Fail;
    o.detail += fmt(" (0,%.2f,0) %.4f%s;", d, c.mean_estimate, ok ? "" : " out of band");
  }
  for (double d : kTableD) {
    const StudyCell& c = cell(b, {d, 0.8, 0.1}, Method::Ls);
    const bool ok = c.failures == 0 && c.mean_estimate - d > 0.3;
    if (!ok) o.verdict = Verdict::Fail;
    o.detail += fmt(" (0.8,%.2f,0.1) %.4f bias %.4f%s;", d, c.mean_estimate, c.mean_estimate - d,
                    ok ? "" : " too small");
  }
  return o;
}

Outcome criterion3() {
  const Scenario plain{0.25, 0, 0}, arma{0.25, 0.1, 0.5};
  const StudyResult r = run_study(spec_for({plain, arma}, 20, {Method::Semiparametric, Method::Ls}, 3));
  const double semi_plain = cell(r, plain, Method::Semiparametric).coverage;
  const double semi_arma = cell(r, arma, Method::Semiparametric).coverage;
  const double ls_arma = cell(r, arma, Method::Ls).coverage;
  const bool ok = semi_plain >= 0.8 && ls_arma < semi_arma;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("coverage, 20 reps, d=0.25: semiparametric (0,d,0) %.2f; (0.1,d,0.5) LS %.2f vs "
              "semiparametric %.2f",
              semi_plain, ls_arma, semi_arma)};
}

Outcome criterion4() {
  const char* path = std::getenv("LOMEM_NILE_CSV");
  if (path == nullptr || *path == '\0') return {Verdict::Skip, "LOMEM_NILE_CSV not set"};
  // Default column: the last one, so "year,value" and plain files both work.
  ColumnSelector column = std::size_t{0};
  if (const char* c = std::getenv("LOMEM_NILE_COLUMN")) {
    column = parse_column_selector(c);
  } else {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    column = static_cast<std::size_t>(std::count(first.begin(), first.end(), ','));
  }
  const TimeSeries x = ingest_csv(path, column);
  EstimationOptions opt;
  opt.ls_trim = 1;
  opt.ls_pooling = 1;
  opt.ls_bandwidth = 252;
  const Estimate ls = estimate(x, Method::Ls, opt, 1);
  const Estimate semi = estimate(x, Method::Semiparametric, EstimationOptions{}, 1);
  const bool ok = std::abs(ls.d_point - 0.386) <= 0.005 && semi.d_point > 0.25 && semi.d_point < 0.45;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("n=%zu; LS m=252 d=%.4f; semiparametric m=%zu mean %.4f (%.4f, %.4f)", x.size(),
              ls.d_point, semi.m, semi.d_point, semi.lower, semi.upper)};
}

Outcome criterion5() {
  struct Named {
    const char* name;
    std::function<props::Check()> run;
  };
  const Named checks[] = {
      {"periodogram", [] { return props::periodogram_properties(); }},
      {"mixture", [] { return props::mixture_properties(1000); }},
      {"loglik", [] { return props::loglik_property(); }},
      {"gibbs", [] { return props::gibbs_conditionals_property(); }},
      {"geweke", [] { return props::geweke_property(5000); }},
      {"concentration", [] { return props::concentration_property(10); }},
  };
  Outcome o{Verdict::Pass, ""};
  for (const Named& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    const props::Check r = c.run();
    if (!r.pass) o.verdict = Verdict::Fail;
    std::printf("  %-13s %s  %s (%.1fs)\n", c.name, r.pass ? "ok  " : "FAIL", r.detail.c_str(),
                elapsed(t0));
    o.detail += fmt("%s%s=%s", o.detail.empty() ? "" : " ", c.name, r.pass ? "ok" : "FAIL");
  }
  return o;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> rs_white, dfa_white, dfa_frac;
  for (unsigned s = 0; s < 20; ++s) {
    const TimeSeries w = simulate({0, 0, 0, 1}, 10000, 6000 + s);
    const TimeSeries f = simulate({0.4, 0, 0, 1}, 10000, 6100 + s);
    rs_white.push_back(rs_hurst(w, false));
    dfa_white.push_back(dfa2(w).alpha);
    dfa_frac.push_back(dfa2(f).alpha);
  }
  const double a = median(rs_white), b = median(dfa_white), c = median(dfa_frac);
  const bool ok = a > 0.45 && a < 0.60 && b > 0.45 && b < 0.58 && c > 0.8 && c < 1.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("medians over 20 seeds: white R/S H %.4f, white DFA2 %.4f, d=0.4 DFA2 %.4f; "
              "runtime %.2fs",
              a, b, c, elapsed(t0))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion7() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lomem_acceptance";
  fs::create_directories(dir);
  Settings s;
  s.study.scenarios = {{0.2, 0, 0}, {0.35, 0.5, 0.1}};
  s.study.replicates = 3;
  s.study.n = 2000;
  s.study.workers = 2;
  s.estimation.chain.iterations = 1000;
  s.estimation.chain.burn_in = 500;
  s.estimation.chain.thin = 1;
  s.estimation.chain.components = 10;
  std::ofstream(dir / "spec.ini") << to_ini(s);
  std::string outputs[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("study" + std::to_string(i) + ".csv");
    fs::remove(out);
    const std::string cmd = std::string(LOMEM_CLI) + " study --seed 11 --format csv --config " +
                            (dir / "spec.ini").string() + " --out " + out.string();
    if (std::system(cmd.c_str()) != 0) return {Verdict::Fail, "study command failed: " + cmd};
    outputs[i] = slurp(out);
  }
  const bool ok = !outputs[0].empty() && outputs[0] == outputs[1];
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("two CLI study runs, %zu bytes each, %s", outputs[0].size(),
              ok ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (int k = 1; k <= 7; ++k) {
    if (!selected.empty() && !selected.count(k)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    if (o.verdict == Verdict::Fail) ++failures;
    std::printf("criterion %d: %s  %s [%.1fs]\n", k, tag, o.detail.c_str(), elapsed(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
