#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bqt::cli {

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
std::string format_number(std::optional<double> v);

// Minimal RFC 4180 writer: fields containing commas, quotes, or newlines are
// quoted.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double v);
  CsvWriter& field(std::optional<double> v);
  CsvWriter& field(int v);
  CsvWriter& field(bool v);
  void end_row();

  const std::string& str() const { return out_; }

 private:
  std::string out_;
  bool row_open_ = false;
};

}  // namespace bqt::cli
