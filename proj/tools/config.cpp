#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace spinsim {
namespace cli {

double RunConfig::number(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing required key: " + key);
  try {
    size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + " is not a number: '" + it->second + "'");
  }
}

double RunConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
    out[key] = val;
  }
  return out;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> kList{
      "lgi",           "lgi-dephasing",    "leeyang-trace", "leeyang-coamoeba",
      "leeyang-amoeba-grid", "mpemba",     "mpemba-genuine", "entloc-localize",
      "entloc-robustness",   "channel-audit"};
  return kList;
}

namespace {

void require(const RunConfig& c, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!c.has(k)) throw ConfigError("missing required key: " + std::string(k));
}

void check_mpemba_rates(const RunConfig& c, Diagnostics* diag) {
  double k0;
  if (c.has("K0")) {
    k0 = c.number("K0");
  } else {
    require(c, {"b", "tauc"});
    double b = c.number("b"), tauc = c.number("tauc");
    if (tauc <= 0) throw ConfigError("key tauc must be positive");
    k0 = 12.0 * b * b * tauc / 5.0;
  }
  if (k0 <= 0) throw ConfigError("key K0 must be positive");
  double delta = c.number("delta");
  if (k0 >= delta)
    diag->warnings.push_back(
        "population-block reduction assumes K0 well below delta; got K0 >= delta");
  else if (k0 >= 0.1 * delta)
    diag->warnings.push_back("K0 is within a factor 10 of delta; coherence leakage grows");
  double eps = c.number("epsilon");
  if (std::abs(eps) >= 1e-3)
    diag->warnings.push_back("epsilon is large for a high-temperature expansion");
}

}  // namespace

Diagnostics validate(const RunConfig& c) {
  Diagnostics diag;
  bool known = false;
  for (const auto& e : known_experiments()) known = known || e == c.experiment;
  if (!known) throw ConfigError("unknown experiment: " + c.experiment);

  if (c.experiment == "lgi") {
    require(c, {"alpha", "phi_deg"});
    double alpha = c.number("alpha");
    if (alpha < 0 || alpha > M_PI / 2)
      throw ConfigError("key alpha outside [0, pi/2]");
    double phi = c.number("phi_deg");
    if (phi < 0 || phi >= 180.0) throw ConfigError("key phi_deg outside [0, 180)");
    if (c.number_or("n", 3) < 3) throw ConfigError("key n must be >= 3");
  } else if (c.experiment == "lgi-dephasing") {
    require(c, {"phi_deg", "gamma"});
    if (c.number("gamma") <= 0) throw ConfigError("key gamma must be positive");
    std::string method = c.text_or("method", "bloch");
    if (method != "bloch" && method != "ancilla")
      throw ConfigError("key method must be bloch or ancilla");
  } else if (c.experiment == "leeyang-trace" || c.experiment == "leeyang-coamoeba") {
    require(c, {"jPA", "jPB", "bJ", "bhA", "bhB"});
    if (c.number("jPA") == 0.0) throw ConfigError("key jPA must be nonzero");
    if (c.number("jPB") == 0.0) throw ConfigError("key jPB must be nonzero");
    if (c.number_or("tmax", 0.3) <= 0) throw ConfigError("key tmax must be positive");
  } else if (c.experiment == "leeyang-amoeba-grid") {
    require(c, {"bJ"});
    if (c.number_or("grid", 21) < 2) throw ConfigError("key grid must be >= 2");
  } else if (c.experiment == "mpemba") {
    require(c, {"theta_deg", "epsilon", "delta"});
    double th = c.number("theta_deg");
    if (th <= 0 || th >= 90) throw ConfigError("key theta_deg outside (0, 90)");
    check_mpemba_rates(c, &diag);
  } else if (c.experiment == "mpemba-genuine") {
    require(c, {"epsilon", "delta"});
    check_mpemba_rates(c, &diag);
  } else if (c.experiment == "entloc-localize") {
    require(c, {"J"});
    if (c.number("J") == 0.0) throw ConfigError("key J must be nonzero");
  } else if (c.experiment == "entloc-robustness") {
    double tz = c.number_or("tau_zero", 1.22);
    double ts = c.number_or("tau_single", 0.25);
    if (!(tz > ts)) throw ConfigError("key tau_zero must exceed tau_single");
  } else if (c.experiment == "channel-audit") {
    double d = c.number_or("d", 2);
    if (d != 2 && d != 3) throw ConfigError("key d must be 2 or 3");
  }
  return diag;
}

}  // namespace cli
}  // namespace spinsim
