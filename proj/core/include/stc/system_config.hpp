#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace stc {

/// Invalid configuration value; key() names the offending setting.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Which antenna count normalizes the all-antennas isotropic benchmark.
enum class AaIsDenominator { n_tx, n_total };

std::string to_string(AaIsDenominator d);

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// dBm -> watts.
double dbm_to_watts(double dbm);
/// dB power ratio -> linear.
double db_to_linear(double db);

/// Every scenario parameter of one experiment. Defaults reproduce the
/// reference scenario: 36-element ULA split 12/24, two devices, L = 1000,
/// 500 trials, 10 dBW budget, kappa = 20 dB, noise -70 dBm, 2.4 GHz carrier.
struct SystemConfig {
    int n_total = 36;
    int n_tx = 12;
    int n_rx = 24;
    int num_devices = 2;
    int blocks = 1000;

    double pt_dbm = 40.0;
    double sigma2_dbm = -70.0;
    double kappa_db = 20.0;
    double wavelength = kSpeedOfLight / 2.4e9;

    double theta_min = deg2rad(-80.0);
    double theta_max = deg2rad(80.0);
    double dist_min = 5.0;
    double dist_max = 15.0;

    double gamma_step = 0.05;
    double music_step_deg = 0.1;

    int trials = 500;
    std::uint64_t seed = 1;
    AaIsDenominator aa_is_denominator = AaIsDenominator::n_tx;

    double pt_watts() const { return dbm_to_watts(pt_dbm); }
    double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }
    /// Linear Rician factor; +inf dB maps to +inf (pure LoS).
    double kappa_linear() const { return db_to_linear(kappa_db); }

    /// Throws ConfigError naming the offending key when an invariant fails.
    void validate() const;

    /// Applies N_r = ceil(split * N), N_t = N - N_r.
    void apply_split(double split);
};

}  // namespace stc
