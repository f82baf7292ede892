// lomem: command line front end for simulation, estimation, diagnostics and
// simulation studies of long-memory time series.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "lomem/arfima.hpp"
#include "lomem/baselines.hpp"
#include "lomem/config.hpp"
#include "lomem/error.hpp"
#include "lomem/io.hpp"
#include "lomem/report.hpp"
#include "lomem/spectral.hpp"
#include "lomem/study.hpp"

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string config;
  std::string out = "-";
  std::string format = "json";
  bool print_config = false;
};

struct Input {
  std::string path;
  std::string column = "0";
  std::string transform = "none";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--config", c.config, "INI configuration file");
  sub->add_option("--out", c.out, "Output path, - for standard output")->capture_default_str();
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_flag("--print-config", c.print_config, "Print the effective configuration and exit");
}

void add_input(CLI::App* sub, Input& in) {
  sub->add_option("--input", in.path, "CSV file with the observations")->required();
  sub->add_option("--column", in.column, "Column index or header name")->capture_default_str();
  sub->add_option("--transform", in.transform, "Preprocessing of the series")
      ->check(CLI::IsMember({"none", "log-returns", "first-difference"}))
      ->capture_default_str();
}

lomem::TimeSeries load_series(const Input& in) {
  const auto raw = lomem::read_csv_column(in.path, lomem::parse_column_selector(in.column));
  return lomem::TimeSeries(lomem::transform(raw, lomem::parse_transform(in.transform)));
}

lomem::Settings load(const Common& c) {
  return c.config.empty() ? lomem::Settings{} : lomem::load_settings(c.config);
}

std::string dump(const nlohmann::json& j) { return lomem::dump_json(j); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian semiparametric long-memory estimation"};
  app.require_subcommand(1);

  Common common;
  Input input;

  auto* sim = app.add_subcommand("simulate", "Simulate an ARFIMA(1, d, 1) series");
  add_common(sim, common);
  std::optional<double> sim_d, sim_phi, sim_theta, sim_sigma2;
  std::optional<std::size_t> sim_n;
  sim->add_option("--d", sim_d, "Memory parameter");
  sim->add_option("--phi", sim_phi, "AR coefficient");
  sim->add_option("--theta", sim_theta, "MA coefficient");
  sim->add_option("--sigma2", sim_sigma2, "Innovation variance");
  sim->add_option("--n", sim_n, "Series length");

  auto* pgram = app.add_subcommand("periodogram", "Periodogram at the Fourier frequencies");
  add_common(pgram, common);
  add_input(pgram, input);

  auto* est = app.add_subcommand("estimate", "Estimate the memory parameter d");
  add_common(est, common);
  add_input(est, input);
  std::string method = "semiparametric";
  est->add_option("--method", method, "Estimator")
      ->check(CLI::IsMember({"semiparametric", "ls", "parametric"}))
      ->capture_default_str();

  auto* diag = app.add_subcommand("diagnostics", "R/S Hurst exponents and DFA2 slope");
  add_common(diag, common);
  add_input(diag, input);

  auto* study = app.add_subcommand("study", "Simulation study over a scenario grid");
  add_common(study, common);
  std::optional<std::size_t> workers;
  study->add_option("--workers", workers, "Concurrent replicates");

  for (auto* sub : {pgram, est, diag}) {
    // --print-config does not need data.
    sub->get_option("--input")->required(false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lomem::Settings settings = load(common);
    if (sim_d) settings.simulate.d = *sim_d;
    if (sim_phi) settings.simulate.phi = *sim_phi;
    if (sim_theta) settings.simulate.theta = *sim_theta;
    if (sim_sigma2) settings.simulate.sigma2 = *sim_sigma2;
    if (sim_n) settings.simulate_n = *sim_n;
    settings.study.base_seed = common.seed;
    if (workers) settings.study.workers = *workers;

    if (common.print_config) {
      lomem::write_output(common.out, lomem::to_ini(settings));
      return 0;
    }
    const bool csv = common.format == "csv";

    if (*sim) {
      const lomem::TimeSeries x =
          lomem::simulate(settings.simulate, settings.simulate_n, common.seed);
      std::string text;
      if (csv) {
        text = "x\n";
        char buf[32];
        for (double v : x.values()) {
          std::snprintf(buf, sizeof buf, "%.17g\n", v);
          text += buf;
        }
      } else {
        nlohmann::json j{{"schema_version", lomem::kSchemaVersion},
                         {"method", "simulate"},
                         {"n", x.size()},
                         {"seed", common.seed},
                         {"extra",
                          {{"d", settings.simulate.d},
                           {"phi", settings.simulate.phi},
                           {"theta", settings.simulate.theta},
                           {"sigma2", settings.simulate.sigma2}}},
                         {"values", std::vector<double>(x.values().begin(), x.values().end())}};
        text = dump(j);
      }
      lomem::write_output(common.out, text);
      return 0;
    }

    if (*study) {
      const lomem::StudyResult result = lomem::run_study(settings.study_spec());
      lomem::write_output(common.out, csv ? lomem::to_csv(result) : dump(lomem::to_json(result)));
      return 0;
    }

    if (input.path.empty()) throw lomem::InvalidInput("--input is required");
    const lomem::TimeSeries series = load_series(input);

    if (*pgram) {
      const lomem::Periodogram pg = lomem::periodogram(series);
      std::string text;
      if (csv) {
        text = "j,frequency,ordinate\n";
        for (std::size_t j = 0; j < pg.size(); ++j) {
          text += std::to_string(j + 1) + "," + lomem::format_number(pg.frequencies[j]) + "," +
                  lomem::format_number(pg.ordinates[j]) + "\n";
        }
      } else {
        nlohmann::json f = nlohmann::json::array(), o = nlohmann::json::array();
        for (std::size_t j = 0; j < pg.size(); ++j) {
          f.push_back(lomem::round6(pg.frequencies[j]));
          o.push_back(lomem::round6(pg.ordinates[j]));
        }
        text = dump({{"schema_version", lomem::kSchemaVersion},
                     {"method", "periodogram"},
                     {"n", pg.n},
                     {"frequencies", f},
                     {"ordinates", o}});
      }
      lomem::write_output(common.out, text);
      return 0;
    }

    if (*est) {
      const lomem::Estimate e = lomem::estimate(series, lomem::parse_method(method),
                                                settings.estimation, common.seed);
      lomem::write_output(common.out, csv ? lomem::to_csv(e) : dump(lomem::to_json(e)));
      return 0;
    }

    if (*diag) {
      const auto start = std::chrono::steady_clock::now();
      const lomem::DiagnosticsReport r = lomem::diagnostics(series);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      lomem::write_output(common.out, csv ? lomem::to_csv(r, series.size())
                                          : dump(lomem::to_json(r, series.size(), secs)));
      return 0;
    }
  } catch (const lomem::Error& e) {
    std::cerr << "lomem: " << e.what() << "\n";
    return lomem::exit_code(e);
  }
  return 0;
}
