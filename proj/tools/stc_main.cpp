// stc: command-line driver for single trials and parameter sweeps.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stc/config_file.hpp"
#include "stc/protocol.hpp"
#include "stc/results_io.hpp"
#include "stc/svg_plot.hpp"
#include "stc/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigFailure = 2, kIoFailure = 3 };

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out;
    std::string plot;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials (overrides the config)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output CSV (default: stdout)");
    cmd->add_option("--plot", o.plot, "write an SVG plot of the result");
}

stc::SystemConfig resolve_config(const CommonOptions& o)
{
    stc::SystemConfig cfg = o.config.empty() ? stc::SystemConfig{} : stc::load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.trials = *o.trials;
    cfg.validate();
    return cfg;
}

void emit_rows(const std::vector<stc::ResultRow>& rows, const CommonOptions& o,
               const stc::PlotLabels& labels)
{
    if (o.out.empty()) {
        std::cout << stc::results_to_csv(rows);
    } else {
        stc::write_results(rows, o.out);
    }
    if (!o.plot.empty()) stc::emit_plot(rows, labels, o.plot);
}

std::vector<double> range(double first, double last, double step)
{
    std::vector<double> v;
    const int n = static_cast<int>(std::lround((last - first) / step));
    for (int i = 0; i <= n; ++i) v.push_back(first + i * step);
    return v;
}

int run_sweep_command(stc::SweepVariable var, const CommonOptions& o, std::vector<double> values)
{
    stc::SweepSpec spec;
    spec.variable = var;
    spec.base = resolve_config(o);
    if (values.empty()) {
        switch (var) {
            case stc::SweepVariable::gamma: values = stc::gamma_grid(spec.base.gamma_step); break;
            case stc::SweepVariable::k: values = range(2, 6, 1); break;
            case stc::SweepVariable::power_dbm: values = range(20, 50, 5); break;
            case stc::SweepVariable::split_fraction: values = range(0.3, 0.9, 0.1); break;
        }
    }
    spec.values = std::move(values);
    const std::vector<stc::ResultRow> rows = stc::run_sweep(spec);

    stc::PlotLabels labels;
    switch (var) {
        case stc::SweepVariable::gamma: labels.x_label = "gamma"; break;
        case stc::SweepVariable::k: labels.x_label = "K"; break;
        case stc::SweepVariable::power_dbm: labels.x_label = "P_t [dBm]"; break;
        case stc::SweepVariable::split_fraction: labels.x_label = "receive fraction"; break;
    }
    labels.title = "average min P_k vs " + labels.x_label;
    emit_rows(rows, o, labels);
    return kOk;
}

int run_gamma_star(const CommonOptions& o)
{
    const stc::SystemConfig cfg = resolve_config(o);
    const std::vector<double> grid = stc::gamma_grid(cfg.gamma_step);
    stc::SweepSpec spec;
    spec.variable = stc::SweepVariable::gamma;
    spec.base = cfg;
    spec.values = grid;
    const std::vector<stc::ResultRow> rows = stc::run_sweep(spec);

    const stc::ResultRow* best = &rows.front();
    for (const auto& r : rows) {
        if (r.swept == r.gamma_star) {
            best = &r;
            break;
        }
    }
    std::cerr << "gamma* = " << best->gamma_star << "  STC = " << best->stc_minp
              << "  PK = " << best->pk_minp << "  AA-IS = " << best->aais_minp << '\n';

    stc::PlotLabels labels;
    labels.title = "gamma search";
    labels.x_label = "gamma";
    if (o.out.empty()) {
        std::cout << stc::results_to_csv({*best});
    } else {
        stc::write_results({*best}, o.out);
    }
    if (!o.plot.empty()) stc::emit_plot(rows, labels, o.plot);
    return kOk;
}

void print_trial(const stc::SystemConfig& cfg, const stc::Deployment& dep,
                 const stc::TrialOutcome& o, const std::vector<double>& pk,
                 const std::vector<double>& aais)
{
    std::ostringstream s;
    s.precision(6);
    s << "N=" << cfg.n_total << " N_t=" << cfg.n_tx << " N_r=" << cfg.n_rx
      << " K=" << cfg.num_devices << " L=" << cfg.blocks << " P_t=" << cfg.pt_watts() << " W"
      << " gamma=" << o.gamma << " L_s=" << o.sensing_blocks << " L_e=" << o.charging_blocks
      << '\n';
    for (int k = 0; k < dep.size(); ++k) {
        const stc::Device& d = dep.devices[k];
        s << "device " << k << ": theta=" << stc::rad2deg(d.theta) << " deg  d=" << d.distance
          << " m  beta=" << d.path_gain << "  |alpha|=" << std::abs(d.alpha) << '\n';
    }
    if (!o.sensed) {
        s << "sensing skipped (L_s < N_t), isotropic transmission for all blocks\n";
    }
    if (o.estimates) {
        const auto& e = *o.estimates;
        for (std::size_t j = 0; j < e.angles.size(); ++j) {
            s << "estimate " << j << ": theta=" << stc::rad2deg(e.angles[j])
              << " deg  |alpha|=" << std::abs(e.alphas[j]) << '\n';
        }
        if (e.degraded) s << "MUSIC found fewer peaks than devices\n";
        if (e.regularized) s << "coefficient LS needed the ridge fallback\n";
    }
    if (o.errors) {
        s << "errors: angle=" << o.errors->angle << " rad  coeff=" << o.errors->coeff
          << "  channel=" << o.errors->channel << '\n';
    }
    if (o.solution) {
        const auto& d = o.solution->diagnostics;
        s << "SDP: iterations=" << d.iterations << " dim=" << d.reduced_dim
          << " primal=" << d.primal_residual << " dual=" << d.dual_residual << " gap=" << d.gap
          << " t*=" << o.solution->t_star << (o.solution->excess_rank ? " (excess rank)" : "")
          << '\n';
    }
    if (o.degraded) s << "trial degraded\n";
    s << "device  P_bar        P_tilde      P_k          PK           AA-IS\n";
    for (int k = 0; k < dep.size(); ++k) {
        char line[160];
        std::snprintf(line, sizeof line, "%-7d %-12.5g %-12.5g %-12.5g %-12.5g %-12.5g\n", k,
                      o.sensing_power[k], o.charging_power[k], o.total_power[k], pk[k], aais[k]);
        s << line;
    }
    std::cout << s.str();
}

int run_trial(const CommonOptions& o, double gamma, int index, const std::string& solution_path)
{
    const stc::SystemConfig cfg = resolve_config(o);
    stc::RandomSource dep_rng = stc::trial_stream(cfg, index, stc::StreamPurpose::deployment);
    const stc::Deployment dep = stc::sample_deployment(cfg, dep_rng);
    const stc::ChannelSet ch = stc::build_channels(dep, stc::ArrayGeometry::from_config(cfg));
    stc::RandomSource noise = stc::trial_stream(cfg, index, stc::StreamPurpose::echo_noise);
    const stc::TrialOutcome out = stc::run_stc(cfg, dep, ch, gamma, noise);

    print_trial(cfg, dep, out, stc::pk_powers(cfg, dep, ch), stc::aa_is_powers(cfg, dep, ch));
    if (!o.out.empty()) {
        if (!out.estimates) throw stc::ConfigError("gamma", "no sensing at this gamma, no spectrum");
        stc::write_spectrum_csv(out.estimates->spectrum, o.out);
    }
    if (!solution_path.empty()) {
        if (!out.solution) throw stc::ConfigError("gamma", "no beamforming solution at this gamma");
        stc::write_solution_csv(*out.solution, solution_path);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sense-then-charge radar/WPT simulator"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<double> values;
    double gamma = 0.3;
    int trial_index = 0;
    std::string solution_path;

    auto* trial = app.add_subcommand("trial", "one realization with verbose diagnostics");
    add_common(trial, opts);
    trial->get_option("--out")->description("MUSIC spectrum CSV (theta_deg,music_power)");
    trial->get_option("--plot")->description("ignored for trial");
    trial->add_option("--gamma", gamma, "sensing fraction")->check(CLI::Range(0.0, 1.0));
    trial->add_option("--index", trial_index, "trial index (selects the random streams)")
        ->check(CLI::NonNegativeNumber);
    trial->add_option("--solution", solution_path, "beamforming solution CSV");

    struct SweepCmd {
        const char* name;
        const char* help;
        stc::SweepVariable var;
        CLI::App* app = nullptr;
    };
    std::vector<SweepCmd> sweeps = {
        {"sweep-gamma", "STC versus the sensing fraction", stc::SweepVariable::gamma},
        {"sweep-k", "all methods versus the device count", stc::SweepVariable::k},
        {"sweep-power", "all methods versus P_t in dBm", stc::SweepVariable::power_dbm},
        {"sweep-split", "all methods versus the receive fraction", stc::SweepVariable::split_fraction},
    };
    for (auto& s : sweeps) {
        s.app = app.add_subcommand(s.name, s.help);
        add_common(s.app, opts);
        s.app->add_option("--values", values, "comma-separated swept values")->delimiter(',');
    }

    auto* gstar = app.add_subcommand("gamma-star", "grid search for the best sensing fraction");
    add_common(gstar, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*trial) return run_trial(opts, gamma, trial_index, solution_path);
        if (*gstar) return run_gamma_star(opts);
        for (const auto& s : sweeps) {
            if (*s.app) return run_sweep_command(s.var, opts, values);
        }
    } catch (const stc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const stc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
