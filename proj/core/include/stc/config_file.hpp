#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "stc/system_config.hpp"

namespace stc {

// Plain-text configuration, one `key = value` per line, `#` starts a
// comment. Omitted keys keep their SystemConfig defaults.
//
//   n_total, n_tx, n_rx       antenna counts (any two determine the third)
//   split                     receive fraction; n_rx = ceil(split * n_total)
//   num_devices               K
//   blocks                    L
//   pt_dbm, sigma2_dbm        transmit budget per block, noise power
//   kappa_db                  Rician factor (inf = pure LoS)
//   carrier_hz | wavelength_m
//   theta_min_deg, theta_max_deg, dist_min_m, dist_max_m
//   gamma_step, music_step_deg, trials, seed
//   aa_is_denominator         n_tx | n_total

/// Parses configuration text; `origin` prefixes error messages.
SystemConfig parse_config(std::string_view text, const std::string& origin = "<config>");

/// Reads and parses a configuration file. Throws ConfigError on unknown
/// keys, malformed values or violated invariants, and std::runtime_error
/// when the file cannot be read.
SystemConfig load_config(const std::filesystem::path& path);

/// Serializes every key; parse_config(format_config(c)) reproduces c up to
/// rounding in the degree/radian conversion of the angle range.
std::string format_config(const SystemConfig& cfg);

}  // namespace stc
