#include "stc/config_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace stc {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

long long parse_int(const std::string& key, std::string_view text)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

int parse_count(const std::string& key, std::string_view text)
{
    const long long v = parse_int(key, text);
    if (v < 0 || v > 1'000'000'000) throw ConfigError(key, "count out of range");
    return static_cast<int>(v);
}

}  // namespace

SystemConfig parse_config(std::string_view text, const std::string& origin)
{
    std::map<std::string, std::string> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no), "empty key");
        if (!entries.emplace(key, value).second) throw ConfigError(key, "duplicate key");
    }

    SystemConfig cfg;
    std::optional<int> n_total, n_tx, n_rx;
    std::optional<double> split;
    for (const auto& [key, value] : entries) {
        if (key == "n_total") n_total = parse_count(key, value);
        else if (key == "n_tx") n_tx = parse_count(key, value);
        else if (key == "n_rx") n_rx = parse_count(key, value);
        else if (key == "split") split = parse_double(key, value);
        else if (key == "num_devices") cfg.num_devices = parse_count(key, value);
        else if (key == "blocks") cfg.blocks = parse_count(key, value);
        else if (key == "pt_dbm") cfg.pt_dbm = parse_double(key, value);
        else if (key == "sigma2_dbm") cfg.sigma2_dbm = parse_double(key, value);
        else if (key == "kappa_db") cfg.kappa_db = parse_double(key, value);
        else if (key == "carrier_hz") {
            const double f = parse_double(key, value);
            if (!(f > 0.0)) throw ConfigError(key, "must be positive");
            cfg.wavelength = kSpeedOfLight / f;
        }
        else if (key == "wavelength_m") cfg.wavelength = parse_double(key, value);
        else if (key == "theta_min_deg") cfg.theta_min = deg2rad(parse_double(key, value));
        else if (key == "theta_max_deg") cfg.theta_max = deg2rad(parse_double(key, value));
        else if (key == "dist_min_m") cfg.dist_min = parse_double(key, value);
        else if (key == "dist_max_m") cfg.dist_max = parse_double(key, value);
        else if (key == "gamma_step") cfg.gamma_step = parse_double(key, value);
        else if (key == "music_step_deg") cfg.music_step_deg = parse_double(key, value);
        else if (key == "trials") cfg.trials = parse_count(key, value);
        else if (key == "seed") {
            const long long s = parse_int(key, value);
            if (s < 0) throw ConfigError(key, "must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        }
        else if (key == "aa_is_denominator") {
            if (value == "n_tx") cfg.aa_is_denominator = AaIsDenominator::n_tx;
            else if (value == "n_total") cfg.aa_is_denominator = AaIsDenominator::n_total;
            else throw ConfigError(key, "expected n_tx or n_total");
        }
        else throw ConfigError(key, "unknown key");
    }
    if (entries.contains("carrier_hz") && entries.contains("wavelength_m")) {
        throw ConfigError("carrier_hz", "conflicts with wavelength_m");
    }

    if (split) {
        if (n_tx || n_rx) throw ConfigError("split", "conflicts with explicit n_tx/n_rx");
        if (n_total) cfg.n_total = *n_total;
        cfg.apply_split(*split);
    } else {
        const int given = (n_total ? 1 : 0) + (n_tx ? 1 : 0) + (n_rx ? 1 : 0);
        if (given == 3) {
            cfg.n_total = *n_total;
            cfg.n_tx = *n_tx;
            cfg.n_rx = *n_rx;
        } else if (n_total && n_rx) {
            cfg.n_total = *n_total;
            cfg.n_rx = *n_rx;
            cfg.n_tx = *n_total - *n_rx;
        } else if (n_total && n_tx) {
            cfg.n_total = *n_total;
            cfg.n_tx = *n_tx;
            cfg.n_rx = *n_total - *n_tx;
        } else if (n_tx && n_rx) {
            cfg.n_tx = *n_tx;
            cfg.n_rx = *n_rx;
            cfg.n_total = *n_tx + *n_rx;
        } else if (n_tx) {
            cfg.n_tx = *n_tx;
            cfg.n_rx = cfg.n_total - *n_tx;
        } else if (n_rx) {
            cfg.n_rx = *n_rx;
            cfg.n_tx = cfg.n_total - *n_rx;
        } else if (n_total) {
            // Keep the default receive fraction.
            const double fraction = static_cast<double>(cfg.n_rx) / cfg.n_total;
            cfg.n_total = *n_total;
            cfg.apply_split(fraction);
        }
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string format_config(const SystemConfig& cfg)
{
    std::ostringstream out;
    out.precision(17);
    out << "n_total = " << cfg.n_total << '\n'
        << "n_tx = " << cfg.n_tx << '\n'
        << "n_rx = " << cfg.n_rx << '\n'
        << "num_devices = " << cfg.num_devices << '\n'
        << "blocks = " << cfg.blocks << '\n'
        << "pt_dbm = " << cfg.pt_dbm << '\n'
        << "sigma2_dbm = " << cfg.sigma2_dbm << '\n'
        << "kappa_db = " << cfg.kappa_db << '\n'
        << "wavelength_m = " << cfg.wavelength << '\n'
        << "theta_min_deg = " << rad2deg(cfg.theta_min) << '\n'
        << "theta_max_deg = " << rad2deg(cfg.theta_max) << '\n'
        << "dist_min_m = " << cfg.dist_min << '\n'
        << "dist_max_m = " << cfg.dist_max << '\n'
        << "gamma_step = " << cfg.gamma_step << '\n'
        << "music_step_deg = " << cfg.music_step_deg << '\n'
        << "trials = " << cfg.trials << '\n'
        << "seed = " << cfg.seed << '\n'
        << "aa_is_denominator = " << to_string(cfg.aa_is_denominator) << '\n';
    return out.str();
}

}  // namespace stc
