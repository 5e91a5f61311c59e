#include "stc/results_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stc {

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <class T>
T parse_field(std::string_view field, std::size_t line)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error("results csv line " + std::to_string(line) + ": bad field '" +
                                 std::string(field) + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string results_to_csv(const std::vector<ResultRow>& rows)
{
    std::string out = kResultsHeader;
    out += '\n';
    for (const auto& r : rows) {
        for (double v : {r.swept, r.stc_minp, r.pk_minp, r.aais_minp, r.stc_minp_se, r.angle_err,
                         r.coeff_err, r.chan_err, r.gamma_star}) {
            out += format_double(v);
            out += ',';
        }
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.degraded);
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> results_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader) {
        throw std::runtime_error("results csv: missing or unexpected header");
    }
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 11) {
            throw std::runtime_error("results csv line " + std::to_string(line_no) +
                                     ": expected 11 fields");
        }
        ResultRow r;
        r.swept = parse_field<double>(f[0], line_no);
        r.stc_minp = parse_field<double>(f[1], line_no);
        r.pk_minp = parse_field<double>(f[2], line_no);
        r.aais_minp = parse_field<double>(f[3], line_no);
        r.stc_minp_se = parse_field<double>(f[4], line_no);
        r.angle_err = parse_field<double>(f[5], line_no);
        r.coeff_err = parse_field<double>(f[6], line_no);
        r.chan_err = parse_field<double>(f[7], line_no);
        r.gamma_star = parse_field<double>(f[8], line_no);
        r.trials = parse_field<int>(f[9], line_no);
        r.degraded = parse_field<int>(f[10], line_no);
        rows.push_back(r);
    }
    return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path)
{
    write_file(path, results_to_csv(rows));
}

std::vector<ResultRow> read_results(const std::filesystem::path& path)
{
    return results_from_csv(read_file(path));
}

void write_spectrum_csv(const std::vector<SpectrumSample>& spectrum,
                        const std::filesystem::path& path)
{
    std::string out = "theta_deg,music_power\n";
    for (const auto& s : spectrum) {
        out += format_double(rad2deg(s.theta));
        out += ',';
        out += format_double(s.power);
        out += '\n';
    }
    write_file(path, out);
}

void write_solution_csv(const BeamSolution& sol, const std::filesystem::path& path)
{
    std::string out = "k,trace_WHk,t_star,kkt_residual\n";
    for (std::size_t k = 0; k < sol.device_power.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(sol.device_power[k]);
        out += ',';
        out += format_double(sol.t_star);
        out += ',';
        out += format_double(sol.kkt_residual[k]);
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace stc
