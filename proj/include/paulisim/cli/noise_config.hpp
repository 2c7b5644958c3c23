#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "paulisim/channels.hpp"

namespace paulisim::cli {

// Values that parse but are out of range or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Noise file contents before f and g are derived.
struct NoiseConfig {
  NoiseModel noise;  // f and g filled in by load_noise_config
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> dt;
};

// Accepts a flat JSON object or `key = value` lines ('#' comments). Keys:
// p, alpha_bar, r, alpha_bar_cx, r_cx, d1, d2, t1, t2, dt. Omitted keys are
// noiseless. f = exp(-dt/t2), g = exp(-dt/t1).
// Throws ParseError on malformed text or duplicate keys, ConfigError on
// unknown keys, out-of-range values, a missing dt, or t2 > 2 t1.
NoiseConfig load_noise_config(std::string_view text);

}  // namespace paulisim::cli
