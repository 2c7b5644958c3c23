#include "paulisim/cli/noise_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>

#include <json.hpp>

#include "paulisim/errors.hpp"

namespace paulisim::cli {

namespace {

constexpr std::array<std::string_view, 10> kKeys{"p", "alpha_bar", "r", "alpha_bar_cx", "r_cx",
                                                 "d1", "d2", "t1", "t2", "dt"};

bool known_key(std::string_view key) {
  for (auto k : kKeys) {
    if (k == key) return true;
  }
  return false;
}

std::string_view trim(std::string_view s, std::size_t& offset) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  offset = b;
  return s.substr(b, e - b);
}

std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::map<std::string, double> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(line, col, "malformed JSON noise file");
  }
  if (!doc.is_object()) throw ParseError(1, 1, "noise file must be a flat JSON object");
  std::map<std::string, double> out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) throw ConfigError("noise key '" + key + "' must be a number");
    out[key] = value.get<double>();
  }
  return out;
}

std::map<std::string, double> parse_key_values(std::string_view text) {
  std::map<std::string, double> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t lead = 0;
    if (trim(line, lead).empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, lead + 1, "expected 'key = value'");
    std::size_t key_off = 0, value_off = 0;
    const std::string_view key = trim(line.substr(0, eq), key_off);
    const std::string_view value = trim(line.substr(eq + 1), value_off);
    if (key.empty()) throw ParseError(line_no, key_off + 1, "missing key");
    const std::size_t value_col = eq + 1 + value_off + 1;
    if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + std::string(key) + "'");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw ParseError(line_no, value_col, "malformed number '" + std::string(value) + "'");
    }
    if (!out.emplace(std::string(key), v).second) {
      throw ParseError(line_no, key_off + 1, "duplicate key '" + std::string(key) + "'");
    }
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace

NoiseConfig load_noise_config(std::string_view text) {
  std::size_t lead = 0;
  const std::string_view body = trim(text, lead);
  const auto values = !body.empty() && body.front() == '{' ? parse_json(text) : parse_key_values(text);

  NoiseConfig cfg;
  for (const auto& [key, v] : values) {
    if (!known_key(key)) throw ConfigError("unknown noise key '" + key + "'");
    if (std::isnan(v)) throw ConfigError("noise key '" + key + "' is NaN");
  }
  auto get = [&](const char* key) -> std::optional<double> {
    const auto it = values.find(key);
    return it == values.end() ? std::nullopt : std::optional<double>(it->second);
  };
  NoiseModel& n = cfg.noise;
  n.p = get("p").value_or(1.0);
  n.alpha_bar = get("alpha_bar").value_or(0.0);
  n.r = get("r").value_or(1.0);
  n.alpha_bar_cx = get("alpha_bar_cx").value_or(0.0);
  n.r_cx = get("r_cx").value_or(1.0);
  n.d1 = get("d1").value_or(1.0);
  n.d2 = get("d2").value_or(1.0);
  cfg.t1 = get("t1");
  cfg.t2 = get("t2");
  cfg.dt = get("dt");

  if ((cfg.t1 || cfg.t2) && !cfg.dt) throw ConfigError("t1/t2 given without a clock step dt");
  if (cfg.dt && !(*cfg.dt > 0.0 && std::isfinite(*cfg.dt))) throw ConfigError("dt must be positive and finite");
  if (cfg.t1 && !(*cfg.t1 > 0.0)) throw ConfigError("t1 must be positive");
  if (cfg.t2 && !(*cfg.t2 > 0.0)) throw ConfigError("t2 must be positive");
  if (cfg.t1 && cfg.t2 && *cfg.t2 > 2.0 * *cfg.t1) throw ConfigError("t2 must not exceed 2 t1");
  n.f = cfg.t2 ? std::exp(-*cfg.dt / *cfg.t2) : 1.0;
  n.g = cfg.t1 ? std::exp(-*cfg.dt / *cfg.t1) : 1.0;
  try {
    n.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace paulisim::cli
