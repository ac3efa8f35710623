#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace otdr {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal form of a double; identical runs therefore
// produce byte-identical files.
std::string csv_double(double v);
std::string csv_int(long long v);

// CSV with '#'-prefixed metadata lines before the header row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file);

  void meta(const std::string& line);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

}  // namespace otdr
