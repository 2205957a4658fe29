#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinsim/qcore.hpp"

namespace spinsim {
namespace csv {

// One header line, rows of 12-significant-digit floats.
std::string format_value(double v);

struct Table {
  std::string header;                       // comma-joined column names
  std::vector<std::vector<double>> rows;
  std::string to_string() const;
};

// Atomic write: temp file in the same directory, then rename.
void write_file(const std::string& path, const std::string& contents);

// FNV-1a over the file bytes, hex-encoded.
std::string checksum(const std::string& contents);

// Debug dump of a complex matrix: row-major "re,im" pairs.
std::string matrix_dump(const Mat& m);

}  // namespace csv
}  // namespace spinsim
