#ifndef LOMEM_CONFIG_HPP
#define LOMEM_CONFIG_HPP

#include <cstddef>
#include <string>

#include "lomem/arfima.hpp"
#include "lomem/study.hpp"

namespace lomem {

/// Everything the command line tool can be configured with.
struct Settings {
  EstimationOptions estimation;
  StudySpec study;  ///< study.options is replaced by `estimation` in study_spec()
  ArfimaParams simulate{0.25, 0.0, 0.0, 1.0};
  std::size_t simulate_n = 10000;

  StudySpec study_spec() const;
};

/// Overlays the keys of an INI file on `base`. Sections and keys mirror the
/// field names of ChainConfig, PriorConfig, EstimationOptions and StudySpec;
/// see to_ini for the full list. Unknown keys and malformed values raise
/// InvalidInput, an unreadable file IoError.
Settings load_settings(const std::string& path, Settings base = {});

/// Same as load_settings, from INI text.
Settings parse_settings(const std::string& text, Settings base = {});

/// Every setting in INI form; parse_settings(to_ini(s)) reproduces s.
std::string to_ini(const Settings& settings);

}  // namespace lomem

#endif  // LOMEM_CONFIG_HPP
