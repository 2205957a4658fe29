#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace spinsim {
namespace cli {

struct RunResult {
  std::vector<std::string> files;          // paths written, in order
  std::vector<std::string> checksums;      // FNV-1a per file
  std::vector<std::pair<std::string, double>> numbers;  // headline results
  std::vector<std::string> warnings;
  double wall_time_s = 0.0;
};

// Dispatch on config.experiment; writes CSV outputs plus manifest.json into
// config.out_dir. Throws ConfigError for bad input and std::runtime_error for
// numerical failures.
RunResult run(const RunConfig& config);

}  // namespace cli
}  // namespace spinsim
