#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stc/system_config.hpp"

namespace stc {

enum class SweepVariable { gamma, k, power_dbm, split_fraction };

std::string to_string(SweepVariable v);

struct SweepSpec {
    SweepVariable variable = SweepVariable::gamma;
    std::vector<double> values;
    SystemConfig base;
    std::filesystem::path output;  // optional; run_sweep does not write it
};

/// One swept value. Power columns are trial averages of min_k P_k in
/// watt-blocks; error columns are averages over trials that sensed (NaN
/// when none did).
struct ResultRow {
    double swept = 0.0;
    double stc_minp = 0.0;
    double pk_minp = 0.0;
    double aais_minp = 0.0;
    double stc_minp_se = 0.0;
    double angle_err = 0.0;
    double coeff_err = 0.0;
    double chan_err = 0.0;
    double gamma_star = 0.0;
    int trials = 0;
    int degraded = 0;

    bool operator==(const ResultRow&) const = default;
};

/// Configuration for one swept value (checks the value's domain).
SystemConfig config_for(const SweepSpec& spec, double value);

/// Runs STC (searching gamma* unless gamma is the swept variable), PK and
/// AA-IS on shared realizations for every value, in sweep order.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

}  // namespace stc
