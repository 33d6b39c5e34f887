#include "bqt/cli/format.hpp"

#include <charconv>
#include <cmath>

namespace bqt::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_number(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (const std::string& h : header) field(h);
  end_row();
}

CsvWriter& CsvWriter::field(const std::string& s) {
  if (row_open_) out_.push_back(',');
  row_open_ = true;
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out_ += s;
    return *this;
  }
  out_.push_back('"');
  for (char c : s) {
    if (c == '"') out_.push_back('"');
    out_.push_back(c);
  }
  out_.push_back('"');
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_number(v)); }
CsvWriter& CsvWriter::field(std::optional<double> v) { return field(format_number(v)); }
CsvWriter& CsvWriter::field(int v) { return field(std::to_string(v)); }
CsvWriter& CsvWriter::field(bool v) { return field(std::string(v ? "1" : "0")); }

void CsvWriter::end_row() {
  out_.push_back('\n');
  row_open_ = false;
}

}  // namespace bqt::cli
