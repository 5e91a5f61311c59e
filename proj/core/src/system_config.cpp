#include "stc/system_config.hpp"

#include <cmath>
#include <numbers>

namespace stc {

std::string to_string(AaIsDenominator d)
{
    return d == AaIsDenominator::n_tx ? "n_tx" : "n_total";
}

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double db_to_linear(double db)
{
    if (std::isinf(db) && db > 0) return db;
    return std::pow(10.0, db / 10.0);
}

void SystemConfig::validate() const
{
    if (num_devices < 1) throw ConfigError("num_devices", "must be >= 1");
    if (n_tx < 1) throw ConfigError("n_tx", "must be >= 1");
    if (n_rx < 1) throw ConfigError("n_rx", "must be >= 1");
    if (n_tx + n_rx != n_total) {
        throw ConfigError("n_total", "must equal n_tx + n_rx (" + std::to_string(n_tx) + " + " +
                                         std::to_string(n_rx) + ")");
    }
    if (n_rx <= num_devices) {
        throw ConfigError("n_rx", "must exceed num_devices (" + std::to_string(num_devices) + ")");
    }
    if (blocks < 1) throw ConfigError("blocks", "must be >= 1");
    if (!(gamma_step > 0.0 && gamma_step <= 1.0)) {
        throw ConfigError("gamma_step", "must lie in (0, 1]");
    }
    if (!(music_step_deg > 0.0 && music_step_deg <= 10.0)) {
        throw ConfigError("music_step_deg", "must lie in (0, 10]");
    }
    if (!(wavelength > 0.0)) throw ConfigError("wavelength_m", "must be positive");
    const double half = std::numbers::pi / 2;
    if (!(theta_min <= theta_max) || theta_min < -half || theta_max > half) {
        throw ConfigError("theta_min_deg", "angle range must be ordered within [-90, 90] deg");
    }
    if (!(dist_min > 0.0 && dist_min <= dist_max)) {
        throw ConfigError("dist_min_m", "distance range must be positive and ordered");
    }
    if (std::isnan(kappa_db)) throw ConfigError("kappa_db", "must be a number (inf = pure LoS)");
    if (!std::isfinite(pt_dbm)) throw ConfigError("pt_dbm", "must be finite");
    if (!std::isfinite(sigma2_dbm) && !(std::isinf(sigma2_dbm) && sigma2_dbm < 0)) {
        throw ConfigError("sigma2_dbm", "must be finite or -inf (noiseless)");
    }
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
}

void SystemConfig::apply_split(double split)
{
    if (!(split > 0.0 && split < 1.0)) throw ConfigError("split", "must lie in (0, 1)");
    // Tolerance keeps products such as (2/3)*36 from rounding up past 24.
    n_rx = static_cast<int>(std::ceil(split * n_total - 1e-9));
    n_tx = n_total - n_rx;
}

}  // namespace stc
