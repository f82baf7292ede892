#include "lomem/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "lomem/error.hpp"

namespace lomem {

namespace {

namespace pt = boost::property_tree;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_integer(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidInput("config: '" + key + "' expects a nonnegative integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidInput("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidInput("config: '" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

std::string scenarios_to_string(const std::vector<Scenario>& s) {
  if (s == default_scenarios()) return "default";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "; ";
    out += fmt(s[i].d) + ":" + fmt(s[i].phi) + ":" + fmt(s[i].theta);
  }
  return out;
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  if (text == "default") return default_scenarios();
  std::vector<Scenario> out;
  for (const std::string& item : split_list(text, ';')) {
    const auto parts = split_list(item, ':');
    if (parts.size() != 3) {
      throw InvalidInput("config: scenario '" + item + "' must be d:phi:theta");
    }
    out.push_back({parse_real("study.scenarios", parts[0]), parse_real("study.scenarios", parts[1]),
                   parse_real("study.scenarios", parts[2])});
  }
  return out;
}

std::string methods_to_string(const std::vector<Method>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + to_string(m[i]);
  return out;
}

std::string form_to_string(RegressorForm f) {
  return f == RegressorForm::SinSquared ? "sin-squared" : "log-lambda";
}

RegressorForm parse_form(const std::string& text) {
  if (text == "sin-squared") return RegressorForm::SinSquared;
  if (text == "log-lambda") return RegressorForm::LogLambda;
  throw InvalidInput("config: regressor must be sin-squared or log-lambda");
}

std::string order_to_string(ArfimaOrder o) {
  return o == ArfimaOrder::Arma11 ? "arfima11" : "arfima0d0";
}

ArfimaOrder parse_order(const std::string& text) {
  if (text == "arfima11") return ArfimaOrder::Arma11;
  if (text == "arfima0d0") return ArfimaOrder::Fractional;
  throw InvalidInput("config: order must be arfima11 or arfima0d0");
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const Settings&)> get;
  std::function<void(Settings&, const std::string&)> set;
};

#define LOMEM_SIZE(sec, name, expr)                                                      \
  Field {                                                                                \
    sec, name, [](const Settings& s) { return std::to_string(s.expr); },                 \
        [](Settings& s, const std::string& v) {                                          \
          s.expr = parse_integer<std::size_t>(std::string(sec) + "." + name, v);         \
        }                                                                                \
  }
#define LOMEM_REAL(sec, name, expr)                                                      \
  Field {                                                                                \
    sec, name, [](const Settings& s) { return fmt(s.expr); },                            \
        [](Settings& s, const std::string& v) {                                          \
          s.expr = parse_real(std::string(sec) + "." + name, v);                         \
        }                                                                                \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      LOMEM_SIZE("chain", "iterations", estimation.chain.iterations),
      LOMEM_SIZE("chain", "burn_in", estimation.chain.burn_in),
      LOMEM_SIZE("chain", "thin", estimation.chain.thin),
      LOMEM_SIZE("chain", "components", estimation.chain.components),
      Field{"chain", "kernel", [](const Settings& s) { return std::string(to_string(s.estimation.chain.kernel)); },
            [](Settings& s, const std::string& v) {
              s.estimation.chain.kernel = parse_kernel_kind(v);
            }},
      Field{"chain", "adapt",
            [](const Settings& s) { return std::string(s.estimation.chain.adapt ? "true" : "false"); },
            [](Settings& s, const std::string& v) {
              s.estimation.chain.adapt = parse_flag("chain.adapt", v);
            }},
      LOMEM_REAL("chain", "target_acceptance", estimation.chain.target_acceptance),

      LOMEM_REAL("scales", "stick", estimation.chain.scales.stick),
      LOMEM_REAL("scales", "knot", estimation.chain.scales.knot),
      LOMEM_REAL("scales", "xi", estimation.chain.scales.xi),
      LOMEM_REAL("scales", "nu", estimation.chain.scales.nu),
      LOMEM_REAL("scales", "hyper", estimation.chain.scales.hyper),
      LOMEM_REAL("scales", "pi", estimation.chain.scales.pi),
      LOMEM_REAL("scales", "param", estimation.chain.scales.param),

      LOMEM_REAL("prior", "c_variance", estimation.chain.prior.c_variance),
      LOMEM_REAL("prior", "d_lower", estimation.chain.prior.d_lower),
      LOMEM_REAL("prior", "d_upper", estimation.chain.prior.d_upper),
      LOMEM_REAL("prior", "ab_upper", estimation.chain.prior.ab_upper),
      LOMEM_REAL("prior", "base_var_shape", estimation.chain.prior.base_var_shape),
      LOMEM_REAL("prior", "base_var_rate", estimation.chain.prior.base_var_rate),
      LOMEM_REAL("prior", "atom_var_shape", estimation.chain.prior.atom_var_shape),
      LOMEM_REAL("prior", "atom_var_rate", estimation.chain.prior.atom_var_rate),
      LOMEM_REAL("prior", "xi_shape", estimation.chain.prior.xi_shape),

      LOMEM_SIZE("semiparametric", "trim", estimation.trim),
      LOMEM_SIZE("semiparametric", "pooling", estimation.pooling),
      LOMEM_SIZE("semiparametric", "bandwidth", estimation.bandwidth),
      LOMEM_REAL("semiparametric", "bandwidth_exponent", estimation.bandwidth_exponent),
      Field{"semiparametric", "regressor",
            [](const Settings& s) { return form_to_string(s.estimation.form); },
            [](Settings& s, const std::string& v) { s.estimation.form = parse_form(v); }},

      LOMEM_SIZE("ls", "trim", estimation.ls_trim),
      LOMEM_SIZE("ls", "pooling", estimation.ls_pooling),
      LOMEM_SIZE("ls", "bandwidth", estimation.ls_bandwidth),

      Field{"parametric", "order",
            [](const Settings& s) { return order_to_string(s.estimation.param_order); },
            [](Settings& s, const std::string& v) { s.estimation.param_order = parse_order(v); }},

      LOMEM_REAL("simulate", "d", simulate.d),
      LOMEM_REAL("simulate", "phi", simulate.phi),
      LOMEM_REAL("simulate", "theta", simulate.theta),
      LOMEM_REAL("simulate", "sigma2", simulate.sigma2),
      LOMEM_SIZE("simulate", "n", simulate_n),

      Field{"study", "scenarios",
            [](const Settings& s) { return scenarios_to_string(s.study.scenarios); },
            [](Settings& s, const std::string& v) { s.study.scenarios = parse_scenarios(v); }},
      LOMEM_SIZE("study", "replicates", study.replicates),
      LOMEM_SIZE("study", "n", study.n),
      Field{"study", "methods", [](const Settings& s) { return methods_to_string(s.study.methods); },
            [](Settings& s, const std::string& v) {
              s.study.methods.clear();
              for (const auto& m : split_list(v, ',')) s.study.methods.push_back(parse_method(m));
            }},
      Field{"study", "seed", [](const Settings& s) { return std::to_string(s.study.base_seed); },
            [](Settings& s, const std::string& v) {
              s.study.base_seed = parse_integer<std::uint64_t>("study.seed", v);
            }},
      LOMEM_SIZE("study", "workers", study.workers),
  };
  return table;
}

#undef LOMEM_SIZE
#undef LOMEM_REAL

}  // namespace

StudySpec Settings::study_spec() const {
  StudySpec spec = study;
  spec.options = estimation;
  return spec;
}

Settings parse_settings(const std::string& text, Settings base) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput("config: " + std::string(e.what()));
  }
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw InvalidInput("config: key '" + section + "' must live in a section");
    }
    for (const auto& [key, value] : keys) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == table.end()) throw InvalidInput("config: unknown key " + section + "." + key);
      it->set(base, value.data());
    }
  }
  return base;
}

Settings load_settings(const std::string& path, Settings base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str(), std::move(base));
}

std::string to_ini(const Settings& settings) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(settings) + "\n";
  }
  return out;
}

}  // namespace lomem
