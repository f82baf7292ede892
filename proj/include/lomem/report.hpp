#ifndef LOMEM_REPORT_HPP
#define LOMEM_REPORT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lomem/baselines.hpp"
#include "lomem/study.hpp"

namespace lomem {

inline constexpr const char* kSchemaVersion = "1";

/// Header of the study CSV report.
inline constexpr const char* kStudyCsvHeader =
    "scenario_d,phi,theta,method,mean_estimate,ci_lo,ci_hi,coverage,n_replicates";

/// printf "%.6g"
std::string format_number(double v);
/// v rounded to six significant digits.
double round6(double v);

/// {schema_version, method, d_point, d_interval: [lo, hi], n, m, K, ell,
///  seed, runtime_seconds, extra}
nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const DiagnosticsReport& r, std::size_t n, double runtime_seconds);
nlohmann::json to_json(const StudyResult& r);

/// Pretty-printed JSON text with floating-point numbers written as "%.6g".
std::string dump_json(const nlohmann::json& j);

/// Header line plus one row.
std::string to_csv(const Estimate& e);
std::string to_csv(const DiagnosticsReport& r, std::size_t n);
/// kStudyCsvHeader plus one row per (scenario, method). Contains no timing,
/// so identical specs give identical bytes.
std::string to_csv(const StudyResult& r);

/// Writes text to `path`, or to standard output when path is "" or "-".
/// Throws IoError when the file cannot be written.
void write_output(const std::string& path, const std::string& text);

}  // namespace lomem

#endif  // LOMEM_REPORT_HPP
