#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace byztree {

// Formats a double with 17 significant digits (round-trip exact), trimming the
// representation the same way everywhere so reruns are byte-identical.
std::string format_double(double value);

// Minimal deterministic CSV emitter: one header row, then data rows. All
// numeric formatting goes through format_double / std::to_string.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  static std::string cell(double value) { return format_double(value); }
  static std::string cell(long long value) { return std::to_string(value); }
  static std::string cell(int value) { return std::to_string(value); }
  static std::string cell(const std::string& value) { return value; }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace byztree
