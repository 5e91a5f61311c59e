#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stc/beamforming.hpp"
#include "stc/sensing.hpp"
#include "stc/sweep.hpp"

namespace stc {

inline constexpr const char* kResultsHeader =
    "swept,stc_minp,pk_minp,aais_minp,stc_minp_se,angle_err,coeff_err,chan_err,gamma_star,"
    "trials,degraded";

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string results_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> results_from_csv(const std::string& text);

/// Throws std::runtime_error naming the path on I/O failure.
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

/// theta_deg,music_power
void write_spectrum_csv(const std::vector<SpectrumSample>& spectrum,
                        const std::filesystem::path& path);

/// k,trace_WHk,t_star,kkt_residual
void write_solution_csv(const BeamSolution& sol, const std::filesystem::path& path);

}  // namespace stc
