#include "spinsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spinsim {
namespace csv {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string Table::to_string() const {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_value(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_file: cannot open " + tmp);
    f << contents;
    if (!f.good()) throw std::runtime_error("write_file: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("write_file: rename failed for " + path);
}

std::string checksum(const std::string& contents) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : contents) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string matrix_dump(const Mat& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_value(m(i, j).real());
      out += ',';
      out += format_value(m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace csv
}  // namespace spinsim
