#include "flocksim/config_text.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "flocksim/errors.hpp"
#include "flocksim/field_io.hpp"

namespace flocksim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(key + " expects an integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const ConfigError&) {
    throw ConfigError(key + " expects a real number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + " expects true or false, got '" + v + "'");
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& schema() {
  static const std::vector<std::pair<std::string, Setter>> s = {
      {"dim", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.dim = static_cast<int>(parse_int(k, v));
       }},
      {"n", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.n = static_cast<int>(parse_int(k, v));
       }},
      {"alpha", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.alpha = parse_real(k, v);
       }},
      {"t_end", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.t_end = parse_real(k, v);
       }},
      {"cfl_advect", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.cfl_advect = parse_real(k, v);
       }},
      {"cfl_diffuse", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.cfl_diffuse = parse_real(k, v);
       }},
      {"dealias", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.dealias = parse_bool(k, v);
       }},
      {"output_cadence", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.output_cadence = parse_real(k, v);
       }},
      {"seed", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.seed = static_cast<std::uint64_t>(parse_int(k, v));
       }},
      {"gamma", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.gamma = parse_real(k, v);
       }},
      {"kernel.images", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.kernel_images = static_cast<int>(parse_int(k, v));
       }},
      {"preset", [](SimConfig& c, const std::string&, const std::string& v) {
         c.preset = v;
       }},
      {"init.rho_bar", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_rho_bar = parse_real(k, v);
       }},
      {"init.a", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_a = parse_real(k, v);
       }},
      {"init.eps", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_eps = parse_real(k, v);
       }},
      {"init.k0", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_k0 = static_cast<int>(parse_int(k, v));
       }},
      {"init.ubar1", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_ubar1 = parse_real(k, v);
       }},
      {"init.ubar2", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.init_ubar2 = parse_real(k, v);
       }},
  };
  return s;
}

}  // namespace

void set_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, setter] : schema()) {
    if (name == key) {
      setter(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  keys.reserve(schema().size());
  for (const auto& [name, setter] : schema()) keys.push_back(name);
  return keys;
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    try {
      set_config_key(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream os;
  os << "dim = " << cfg.dim << "\n";
  os << "n = " << cfg.n << "\n";
  os << "alpha = " << format_double(cfg.alpha) << "\n";
  os << "t_end = " << format_double(cfg.t_end) << "\n";
  os << "cfl_advect = " << format_double(cfg.cfl_advect) << "\n";
  os << "cfl_diffuse = " << format_double(cfg.cfl_diffuse) << "\n";
  os << "dealias = " << (cfg.dealias ? "true" : "false") << "\n";
  os << "output_cadence = " << format_double(cfg.output_cadence) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "gamma = " << format_double(cfg.gamma) << "\n";
  os << "kernel.images = " << cfg.kernel_images << "\n";
  os << "preset = " << cfg.preset << "\n";
  os << "init.rho_bar = " << format_double(cfg.init_rho_bar) << "\n";
  os << "init.a = " << format_double(cfg.init_a) << "\n";
  os << "init.eps = " << format_double(cfg.init_eps) << "\n";
  os << "init.k0 = " << cfg.init_k0 << "\n";
  os << "init.ubar1 = " << format_double(cfg.init_ubar1) << "\n";
  os << "init.ubar2 = " << format_double(cfg.init_ubar2) << "\n";
  return os.str();
}

}  // namespace flocksim
