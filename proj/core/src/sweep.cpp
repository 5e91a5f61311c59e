#include "stc/sweep.hpp"

#include <cmath>
#include <limits>

#include "stc/protocol.hpp"

namespace stc {

std::string to_string(SweepVariable v)
{
    switch (v) {
        case SweepVariable::gamma: return "gamma";
        case SweepVariable::k: return "k";
        case SweepVariable::power_dbm: return "power_dbm";
        case SweepVariable::split_fraction: return "split_fraction";
    }
    return "?";
}

SystemConfig config_for(const SweepSpec& spec, double value)
{
    SystemConfig cfg = spec.base;
    switch (spec.variable) {
        case SweepVariable::gamma:
            if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("gamma", "must lie in [0, 1]");
            break;
        case SweepVariable::k:
            if (!(value >= 1.0) || value != std::floor(value)) {
                throw ConfigError("num_devices", "swept K must be a positive integer");
            }
            cfg.num_devices = static_cast<int>(value);
            break;
        case SweepVariable::power_dbm:
            if (!std::isfinite(value)) throw ConfigError("pt_dbm", "must be finite");
            cfg.pt_dbm = value;
            break;
        case SweepVariable::split_fraction:
            cfg.apply_split(value);
            break;
    }
    cfg.validate();
    return cfg;
}

namespace {

struct ErrorMeans {
    double angle = 0.0;
    double coeff = 0.0;
    double channel = 0.0;
    int degraded = 0;
};

ErrorMeans error_means(const TrialTable& table, std::size_t g)
{
    ErrorMeans m;
    int sensed = 0;
    for (const auto& row : table.stc) {
        const GammaPoint& p = row[g];
        if (p.degraded) ++m.degraded;
        if (!p.sensed) continue;
        ++sensed;
        m.angle += p.errors.angle;
        m.coeff += p.errors.coeff;
        m.channel += p.errors.channel;
    }
    if (sensed == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        m.angle = m.coeff = m.channel = nan;
    } else {
        m.angle /= sensed;
        m.coeff /= sensed;
        m.channel /= sensed;
    }
    return m;
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

ResultRow make_row(double swept, const TrialTable& table, const GammaSearchResult& search,
                   std::size_t g, double gamma_star)
{
    const ErrorMeans e = error_means(table, g);
    ResultRow row;
    row.swept = swept;
    row.stc_minp = search.mean_min_power[g];
    row.stc_minp_se = search.std_error[g];
    row.pk_minp = mean(table.pk_min);
    row.aais_minp = mean(table.aais_min);
    row.angle_err = e.angle;
    row.coeff_err = e.coeff;
    row.chan_err = e.channel;
    row.gamma_star = gamma_star;
    row.trials = static_cast<int>(table.stc.size());
    row.degraded = e.degraded;
    return row;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec)
{
    if (spec.values.empty()) throw ConfigError("values", "sweep needs at least one value");
    std::vector<ResultRow> rows;
    if (spec.variable == SweepVariable::gamma) {
        for (double v : spec.values) (void)config_for(spec, v);
        const TrialTable table = evaluate_trials(spec.base, spec.values);
        const GammaSearchResult search = summarize_gamma(table);
        for (std::size_t g = 0; g < spec.values.size(); ++g) {
            rows.push_back(make_row(spec.values[g], table, search, g, search.gamma_star));
        }
        return rows;
    }
    for (double v : spec.values) {
        const SystemConfig cfg = config_for(spec, v);
        const std::vector<double> grid = gamma_grid(cfg.gamma_step);
        const TrialTable table = evaluate_trials(cfg, grid);
        const GammaSearchResult search = summarize_gamma(table);
        rows.push_back(make_row(v, table, search, search.star_index, search.gamma_star));
    }
    return rows;
}

}  // namespace stc
