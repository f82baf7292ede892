#include "lomem/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "lomem/error.hpp"

namespace lomem {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round6(v);
}

void dump_value(const json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_value(it.value(), depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_value(j, 0, out);
  out += "\n";
  return out;
}

json to_json(const Estimate& e) {
  json extra = json::object();
  for (const auto& [key, value] : e.extra) extra[key] = number(value);
  return json{{"schema_version", kSchemaVersion},
              {"method", to_string(e.method)},
              {"d_point", number(e.d_point)},
              {"d_interval", {number(e.lower), number(e.upper)}},
              {"n", e.n},
              {"m", e.m},
              {"K", e.pooling},
              {"ell", e.trim},
              {"seed", e.seed},
              {"runtime_seconds", number(e.runtime_seconds)},
              {"extra", extra}};
}

json to_json(const DiagnosticsReport& r, std::size_t n, double runtime_seconds) {
  return json{{"schema_version", kSchemaVersion},
              {"method", "diagnostics"},
              {"n", n},
              {"runtime_seconds", number(runtime_seconds)},
              {"extra",
               {{"rs_hurst", number(r.rs_hurst)},
                {"corrected_rs_hurst", number(r.corrected_rs_hurst)},
                {"empirical_hurst", number(r.empirical_hurst)},
                {"dfa2_slope", number(r.dfa2_slope)},
                {"dfa2_degenerate", r.dfa2_degenerate}}}};
}

json to_json(const StudyResult& r) {
  json cells = json::array();
  for (const StudyCell& c : r.cells) {
    cells.push_back({{"scenario_d", number(c.scenario.d)},
                     {"phi", number(c.scenario.phi)},
                     {"theta", number(c.scenario.theta)},
                     {"method", to_string(c.method)},
                     {"mean_estimate", number(c.mean_estimate)},
                     {"ci_lo", number(c.ci_lo)},
                     {"ci_hi", number(c.ci_hi)},
                     {"coverage", number(c.coverage)},
                     {"n_replicates", c.n_replicates},
                     {"failures", c.failures}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"method", "study"},
              {"runtime_seconds", number(r.runtime_seconds)},
              {"cells", cells}};
}

std::string to_csv(const Estimate& e) {
  std::string out = "method,d_point,ci_lo,ci_hi,n,m,K,ell,seed,runtime_seconds\n";
  out += to_string(e.method) + "," + format_number(e.d_point) + "," + format_number(e.lower) +
         "," + format_number(e.upper) + "," + std::to_string(e.n) + "," + std::to_string(e.m) +
         "," + std::to_string(e.pooling) + "," + std::to_string(e.trim) + "," +
         std::to_string(e.seed) + "," + format_number(e.runtime_seconds) + "\n";
  return out;
}

std::string to_csv(const DiagnosticsReport& r, std::size_t n) {
  std::string out = "n,rs_hurst,corrected_rs_hurst,empirical_hurst,dfa2_slope,dfa2_degenerate\n";
  out += std::to_string(n) + "," + format_number(r.rs_hurst) + "," +
         format_number(r.corrected_rs_hurst) + "," + format_number(r.empirical_hurst) + "," +
         format_number(r.dfa2_slope) + "," + (r.dfa2_degenerate ? "true" : "false") + "\n";
  return out;
}

std::string to_csv(const StudyResult& r) {
  std::string out = std::string(kStudyCsvHeader) + "\n";
  for (const StudyCell& c : r.cells) {
    out += format_number(c.scenario.d) + "," + format_number(c.scenario.phi) + "," +
           format_number(c.scenario.theta) + "," + to_string(c.method) + "," +
           format_number(c.mean_estimate) + "," + format_number(c.ci_lo) + "," +
           format_number(c.ci_hi) + "," + format_number(c.coverage) + "," +
           std::to_string(c.n_replicates) + "\n";
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace lomem
