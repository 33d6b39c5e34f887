#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bqt::cli {

enum class Format { Csv, Json, Markdown };

// Everything a subcommand needs. Grid axes left unset fall back to the
// subcommand's default panels. Angles are stored in units of pi.
struct RunConfig {
  std::string subcommand;
  std::optional<std::vector<double>> p;
  std::optional<std::vector<int>> n;
  std::optional<std::vector<int>> m;
  std::optional<std::vector<double>> theta_e;
  std::optional<std::vector<double>> theta_o;
  std::string direction = "both";  // ab, ba, both
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 7;
  std::string rho1_mode = "trace";     // trace, paper
  std::string weights = "printed";     // printed, half-angle, trace
  std::string grouping = "inside";     // inside, outside
  std::optional<Format> format;
  std::string out;
  std::optional<std::vector<double>> eta;
  std::optional<int> cutoff;
  std::string circuit_path;
  std::string save_circuit;
  int points = 0;  // samples along the swept angle; 0 selects the default
  bool bars = false;
};

// "0.1,0.2" lists and "start:stop:count" inclusive ranges.
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
Format parse_format(const std::string& text);

// Applies a JSON run-config document on top of `config`.
void apply_json_config(RunConfig& config, const std::string& json_text);

// Throws ParseError describing the first usage problem (empty grid, unknown
// mode name, zero shots).
void validate(const RunConfig& config);

}  // namespace bqt::cli
