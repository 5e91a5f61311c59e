#include "stc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stc/parallel.hpp"

namespace stc {

RandomSource trial_stream(const SystemConfig& cfg, int trial, StreamPurpose purpose)
{
    return RandomSource(cfg.seed,
                        stream_id(static_cast<std::uint64_t>(trial),
                                  static_cast<std::uint64_t>(purpose)));
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost)
{
    // Hungarian method with row/column potentials, O(n^3).
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw ContractViolation("min_cost_assignment: cost must be square");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
    return assignment;
}

EstimationErrors estimation_errors(const Deployment& dep, const TargetEstimates& est, int n_total)
{
    const int k = dep.size();
    if (static_cast<int>(est.angles.size()) != k || static_cast<int>(est.alphas.size()) != k) {
        throw ContractViolation("estimation_errors: need one estimate per device");
    }
    Eigen::MatrixXd cost(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) cost(i, j) = std::abs(dep.devices[i].theta - est.angles[j]);
    }
    const std::vector<int> match = min_cost_assignment(cost);

    EstimationErrors e;
    for (int i = 0; i < k; ++i) {
        const Device& d = dep.devices[i];
        const int j = match[i];
        e.angle += std::abs(d.theta - est.angles[j]);
        e.coeff += std::abs(d.alpha - est.alphas[j]) / std::abs(d.alpha);
        const CVector diff = d.path_gain * steering_vector(d.theta, n_total) -
                             std::sqrt(std::abs(est.alphas[j])) *
                                 steering_vector(est.angles[j], n_total);
        e.channel += diff.norm() / (n_total * d.path_gain);
    }
    e.angle /= k;
    e.coeff /= k;
    e.channel /= k;
    return e;
}

double TrialOutcome::min_power() const
{
    return total_power.empty() ? 0.0 : *std::min_element(total_power.begin(), total_power.end());
}

TrialOutcome run_stc(const SystemConfig& cfg, const AngleGrid& grid, const Deployment& dep,
                     const ChannelSet& ch, double gamma, RandomSource& rng)
{
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ContractViolation("run_stc: gamma outside [0, 1]");
    if (grid.n_rx() != cfg.n_rx) throw ContractViolation("run_stc: grid built for another n_rx");
    const int k = dep.size();
    const int blocks = cfg.blocks;
    const double power = cfg.pt_watts();
    const ArrayGeometry geom = ArrayGeometry::from_config(cfg);

    TrialOutcome out;
    out.gamma = gamma;
    // The epsilon keeps grid values such as 0.29 * 100 from flooring one block short.
    out.sensing_blocks = std::clamp(static_cast<int>(std::floor(gamma * blocks + 1e-9)), 0, blocks);
    out.charging_blocks = blocks - out.sensing_blocks;
    out.sensing_power.resize(k);
    for (int i = 0; i < k; ++i) {
        out.sensing_power[i] =
            isotropic_block_power(ch.devices[i].tx, dep.devices[i].path_gain, power);
    }

    out.charging_power = out.sensing_power;  // isotropic fallback
    if (out.sensing_blocks >= cfg.n_tx) {
        out.sensed = true;
        try {
            const SensingDesign design = design_sensing(cfg.n_tx, out.sensing_blocks, power);
            const EchoFrame echo =
                synthesize_echo(dep, ch, design.waveform, cfg.sigma2_watts(), rng);
            MusicEstimate music = music_estimate_aoas(echo, k, grid);
            CoefficientEstimate coeffs =
                estimate_coefficients(echo, design.waveform, music.angles, geom.rx_anchor());

            TargetEstimates est;
            est.angles = std::move(music.angles);
            est.alphas = std::move(coeffs.alphas);
            est.spectrum = std::move(music.spectrum);
            est.degraded = music.degraded;
            est.regularized = coeffs.regularized;
            out.degraded = est.degraded || est.regularized;
            out.errors = estimation_errors(dep, est, cfg.n_total);

            std::vector<double> weights;
            for (const cplx& a : est.alphas) weights.push_back(std::abs(a));
            out.estimates = std::move(est);

            BeamSolution sol = solve_maxmin(
                los_charging_matrices(out.estimates->angles, weights, cfg.n_total), power);
            for (int i = 0; i < k; ++i) {
                out.charging_power[i] = received_power(ch.devices[i].scaled, sol.beams);
            }
            out.solution = std::move(sol);
        } catch (const Error&) {
            out.degraded = true;
            const CMatrix iso = isotropic_beamformer(cfg.n_total, power);
            for (int i = 0; i < k; ++i) {
                out.charging_power[i] = received_power(ch.devices[i].scaled, iso);
            }
        }
    }

    out.total_power.resize(k);
    for (int i = 0; i < k; ++i) {
        out.total_power[i] = out.sensing_blocks * out.sensing_power[i] +
                             out.charging_blocks * out.charging_power[i];
    }
    return out;
}

TrialOutcome run_stc(const SystemConfig& cfg, const Deployment& dep, const ChannelSet& ch,
                     double gamma, RandomSource& rng)
{
    const AngleGrid grid(cfg.n_rx, cfg.music_step_deg);
    return run_stc(cfg, grid, dep, ch, gamma, rng);
}

std::vector<double> aa_is_powers(const SystemConfig& cfg, const Deployment& dep,
                                 const ChannelSet& ch)
{
    std::vector<double> out;
    out.reserve(dep.devices.size());
    for (std::size_t i = 0; i < dep.devices.size(); ++i) {
        const CVector& h = cfg.aa_is_denominator == AaIsDenominator::n_tx ? ch.devices[i].tx
                                                                          : ch.devices[i].full;
        out.push_back(aa_is_power(h, dep.devices[i].path_gain, cfg.pt_watts(), cfg.blocks));
    }
    return out;
}

std::vector<double> pk_powers(const SystemConfig& cfg, const Deployment& dep, const ChannelSet& ch)
{
    const BeamSolution sol = pk_benchmark(dep, cfg.n_total, cfg.pt_watts());
    std::vector<double> out;
    out.reserve(dep.devices.size());
    for (const auto& d : ch.devices) {
        out.push_back(static_cast<double>(cfg.blocks) * received_power(d.scaled, sol.beams));
    }
    return out;
}

std::vector<double> gamma_grid(double step)
{
    if (!(step > 0.0 && step <= 1.0)) throw ContractViolation("gamma_grid: step outside (0, 1]");
    const double ratio = 1.0 / step;
    const long count = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(count)) > 1e-9 * ratio) {
        throw ContractViolation("gamma_grid: step must divide 1");
    }
    std::vector<double> out;
    out.reserve(count + 1);
    for (long u = 0; u <= count; ++u) out.push_back(static_cast<double>(u) / count);
    return out;
}

TrialTable evaluate_trials(const SystemConfig& cfg, std::span<const double> gammas)
{
    cfg.validate();
    if (gammas.empty()) throw ContractViolation("evaluate_trials: empty gamma list");
    const AngleGrid grid(cfg.n_rx, cfg.music_step_deg);
    const ArrayGeometry geom = ArrayGeometry::from_config(cfg);
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);

    TrialTable table;
    table.gammas.assign(gammas.begin(), gammas.end());
    table.stc.assign(trials, std::vector<GammaPoint>(gammas.size()));
    table.pk_min.assign(trials, 0.0);
    table.aais_min.assign(trials, 0.0);

    parallel_for(trials, [&](std::size_t t) {
        RandomSource dep_rng = trial_stream(cfg, static_cast<int>(t), StreamPurpose::deployment);
        const Deployment dep = sample_deployment(cfg, dep_rng);
        const ChannelSet ch = build_channels(dep, geom);

        const auto pk = pk_powers(cfg, dep, ch);
        const auto aais = aa_is_powers(cfg, dep, ch);
        table.pk_min[t] = *std::min_element(pk.begin(), pk.end());
        table.aais_min[t] = *std::min_element(aais.begin(), aais.end());

        for (std::size_t g = 0; g < gammas.size(); ++g) {
            // Fresh copy of the same noise stream for every gamma.
            RandomSource noise = trial_stream(cfg, static_cast<int>(t), StreamPurpose::echo_noise);
            const TrialOutcome o = run_stc(cfg, grid, dep, ch, gammas[g], noise);
            GammaPoint& p = table.stc[t][g];
            p.min_power = o.min_power();
            p.sensed = o.errors.has_value();
            if (o.errors) p.errors = *o.errors;
            p.degraded = o.degraded;
        }
    });
    return table;
}

GammaSearchResult summarize_gamma(const TrialTable& table)
{
    const std::size_t ng = table.gammas.size();
    const double n = static_cast<double>(table.stc.size());
    GammaSearchResult r;
    r.gammas = table.gammas;
    r.mean_min_power.assign(ng, 0.0);
    r.std_error.assign(ng, 0.0);
    for (std::size_t g = 0; g < ng; ++g) {
        double sum = 0.0;
        for (const auto& row : table.stc) sum += row[g].min_power;
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& row : table.stc) ss += (row[g].min_power - mean) * (row[g].min_power - mean);
        r.mean_min_power[g] = mean;
        r.std_error[g] = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    }
    r.star_index = 0;
    for (std::size_t g = 1; g < ng; ++g) {
        if (r.mean_min_power[g] > r.mean_min_power[r.star_index]) r.star_index = g;
    }
    r.gamma_star = r.gammas[r.star_index];
    r.objective = r.mean_min_power[r.star_index];
    return r;
}

GammaSearchResult find_gamma_star(const SystemConfig& cfg, std::span<const double> gammas)
{
    return summarize_gamma(evaluate_trials(cfg, gammas));
}

GammaSearchResult find_gamma_star(const SystemConfig& cfg)
{
    const std::vector<double> grid = gamma_grid(cfg.gamma_step);
    return find_gamma_star(cfg, grid);
}

}  // namespace stc
