#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinsim {
namespace cli {

// Flat key=value configuration with per-experiment validation.
struct RunConfig {
  std::string experiment;
  std::map<std::string, std::string> values;
  std::string out_dir = ".";
  uint64_t seed = 0;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

const std::vector<std::string>& known_experiments();

struct Diagnostics {
  std::vector<std::string> warnings;
};

// Throws ConfigError naming the offending key; returns soft warnings.
Diagnostics validate(const RunConfig& config);

}  // namespace cli
}  // namespace spinsim
