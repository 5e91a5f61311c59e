#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stc/beamforming.hpp"
#include "stc/channel.hpp"
#include "stc/sensing.hpp"
#include "stc/system_config.hpp"

namespace stc {

/// Stream purposes; each trial owns one stream per purpose.
enum class StreamPurpose : std::uint64_t { deployment = 1, echo_noise = 2 };

RandomSource trial_stream(const SystemConfig& cfg, int trial, StreamPurpose purpose);

struct EstimationErrors {
    double angle = 0.0;    // rad, mean |theta_k - theta_hat_k|
    double coeff = 0.0;    // mean |alpha_k - alpha_hat_k| / |alpha_k|
    double channel = 0.0;  // mean ||beta_k a(theta_k) - sqrt|alpha_hat_k| a(theta_hat_k)|| / (N beta_k)
};

/// Minimum-cost one-to-one assignment on a square cost matrix; returns
/// column index assigned to each row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Error metrics after matching estimates to devices by minimum total
/// angular distance.
EstimationErrors estimation_errors(const Deployment& dep, const TargetEstimates& est, int n_total);

struct TrialOutcome {
    double gamma = 0.0;
    int sensing_blocks = 0;   // L_s
    int charging_blocks = 0;  // L_e
    bool sensed = false;      // L_s >= n_tx, estimation ran
    std::vector<double> sensing_power;   // P̄_k per block
    std::vector<double> charging_power;  // P̃_k per block
    std::vector<double> total_power;     // L_s P̄_k + L_e P̃_k
    std::optional<TargetEstimates> estimates;
    std::optional<EstimationErrors> errors;
    std::optional<BeamSolution> solution;
    bool degraded = false;

    double min_power() const;
};

/// One realization of the sense-then-charge protocol at split gamma.
TrialOutcome run_stc(const SystemConfig& cfg, const AngleGrid& grid, const Deployment& dep,
                     const ChannelSet& ch, double gamma, RandomSource& rng);
TrialOutcome run_stc(const SystemConfig& cfg, const Deployment& dep, const ChannelSet& ch,
                     double gamma, RandomSource& rng);

/// AA-IS per-device energy over L blocks, honouring cfg.aa_is_denominator.
std::vector<double> aa_is_powers(const SystemConfig& cfg, const Deployment& dep,
                                 const ChannelSet& ch);

/// Perfect-knowledge per-device energy over L blocks.
std::vector<double> pk_powers(const SystemConfig& cfg, const Deployment& dep, const ChannelSet& ch);

/// {0, xi, 2 xi, ..., 1}.
std::vector<double> gamma_grid(double step);

/// Per-trial summary at one gamma.
struct GammaPoint {
    double min_power = 0.0;
    bool sensed = false;
    EstimationErrors errors;
    bool degraded = false;
};

/// Shared-realization evaluation of STC over a gamma grid plus both benchmarks.
struct TrialTable {
    std::vector<double> gammas;
    std::vector<std::vector<GammaPoint>> stc;  // [trial][gamma]
    std::vector<double> pk_min;                // [trial]
    std::vector<double> aais_min;              // [trial]
};

TrialTable evaluate_trials(const SystemConfig& cfg, std::span<const double> gammas);

struct GammaSearchResult {
    std::vector<double> gammas;
    std::vector<double> mean_min_power;
    std::vector<double> std_error;
    double gamma_star = 0.0;
    double objective = 0.0;
    std::size_t star_index = 0;
};

/// Grid maximizer of the trial-averaged min_k P_k; ties go to smaller gamma.
GammaSearchResult summarize_gamma(const TrialTable& table);
GammaSearchResult find_gamma_star(const SystemConfig& cfg);
GammaSearchResult find_gamma_star(const SystemConfig& cfg, std::span<const double> gammas);

}  // namespace stc
