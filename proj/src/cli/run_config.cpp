#include "bqt/cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "bqt/error.hpp"
#include "json.hpp"

namespace bqt::cli {

namespace {

double parse_real(const std::string& token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::ParseError, "not a number: '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename T>
std::vector<T> json_list(const nlohmann::json& v, const char* key) {
  if (v.is_array()) return v.get<std::vector<T>>();
  if (v.is_number()) return {v.get<T>()};
  if (v.is_string()) {
    if constexpr (std::is_same_v<T, double>) return parse_real_list(v.get<std::string>());
    else return parse_int_list(v.get<std::string>());
  }
  throw Error(ErrorCode::ParseError, std::string("run-config key '") + key + "' has the wrong type");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& raw : split(text, ',')) {
    const std::string item = trim(raw);
    if (item.empty()) throw Error(ErrorCode::ParseError, "empty list item in '" + text + "'");
    const std::vector<std::string> parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(item));
    } else if (parts.size() == 3) {
      const double a = parse_real(trim(parts[0]));
      const double b = parse_real(trim(parts[1]));
      const double count = parse_real(trim(parts[2]));
      if (count < 1 || count != std::floor(count)) {
        throw Error(ErrorCode::ParseError, "range count must be a positive integer in '" + item + "'");
      }
      const int k = static_cast<int>(count);
      for (int i = 0; i < k; ++i) out.push_back(k == 1 ? a : a + (b - a) * i / (k - 1));
    } else {
      throw Error(ErrorCode::ParseError, "ranges are written start:stop:count, got '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_real_list(text)) {
    if (v != std::floor(v)) throw Error(ErrorCode::ParseError, "expected integers in '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "md" || text == "markdown") return Format::Markdown;
  throw Error(ErrorCode::ParseError, "unknown format '" + text + "' (csv, json, md)");
}

void apply_json_config(RunConfig& c, const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run-config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "run-config must be a JSON object");
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const nlohmann::json& v = it.value();
      if (k == "subcommand") c.subcommand = v.get<std::string>();
      else if (k == "p") c.p = json_list<double>(v, "p");
      else if (k == "n") c.n = json_list<int>(v, "n");
      else if (k == "m") c.m = json_list<int>(v, "m");
      else if (k == "theta_e") c.theta_e = json_list<double>(v, "theta_e");
      else if (k == "theta_o") c.theta_o = json_list<double>(v, "theta_o");
      else if (k == "direction") c.direction = v.get<std::string>();
      else if (k == "shots") c.shots = v.get<std::uint64_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "rho1_mode") c.rho1_mode = v.get<std::string>();
      else if (k == "weights") c.weights = v.get<std::string>();
      else if (k == "grouping") c.grouping = v.get<std::string>();
      else if (k == "format") c.format = parse_format(v.get<std::string>());
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "eta") c.eta = json_list<double>(v, "eta");
      else if (k == "cutoff") c.cutoff = v.get<int>();
      else if (k == "circuit") c.circuit_path = v.get<std::string>();
      else if (k == "points") c.points = v.get<int>();
      else throw Error(ErrorCode::ParseError, "unknown run-config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run-config: ") + e.what());
  }
}

void validate(const RunConfig& c) {
  auto nonempty = [](const auto& axis, const char* name) {
    if (axis && axis->empty()) throw Error(ErrorCode::ParseError, std::string("empty grid for ") + name);
  };
  nonempty(c.p, "--p");
  nonempty(c.n, "--n");
  nonempty(c.m, "--m");
  nonempty(c.theta_e, "--theta-e");
  nonempty(c.theta_o, "--theta-o");
  nonempty(c.eta, "--eta");
  if (c.direction != "ab" && c.direction != "ba" && c.direction != "both") {
    throw Error(ErrorCode::ParseError, "--direction must be ab, ba, or both");
  }
  if (c.rho1_mode != "trace" && c.rho1_mode != "paper") {
    throw Error(ErrorCode::ParseError, "--rho1-mode must be trace or paper");
  }
  if (c.weights != "printed" && c.weights != "half-angle" && c.weights != "trace") {
    throw Error(ErrorCode::ParseError, "--weights must be printed, half-angle, or trace");
  }
  if (c.grouping != "inside" && c.grouping != "outside") {
    throw Error(ErrorCode::ParseError, "--grouping must be inside or outside");
  }
  if (c.shots && *c.shots < 1) throw Error(ErrorCode::ParseError, "--shots must be at least 1");
  if (c.points < 0 || c.points == 1) throw Error(ErrorCode::ParseError, "--points must be >= 2");
}

}  // namespace bqt::cli
