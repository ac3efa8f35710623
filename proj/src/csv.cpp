#include "otdr/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace otdr {

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_int(long long v) { return std::to_string(v); }

CsvWriter::CsvWriter(const std::filesystem::path& file) : out_(file) {
  if (!out_) throw std::runtime_error("cannot open " + file.string() + " for writing");
}

void CsvWriter::meta(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

}  // namespace otdr
