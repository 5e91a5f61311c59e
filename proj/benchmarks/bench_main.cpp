// Microbenchmarks for the per-trial hot paths.

#include <benchmark/benchmark.h>

#include "stc/protocol.hpp"

namespace {

using namespace stc;

CMatrix random_gram(int n)
{
    RandomSource rng(11, 0);
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.complex_normal(1.0);
    }
    return a * a.adjoint();
}

void BM_HermitianEig(benchmark::State& state)
{
    const CMatrix m = random_gram(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(m));
}
BENCHMARK(BM_HermitianEig)->Arg(12)->Arg(24)->Arg(36);

struct Scene {
    SystemConfig cfg;
    Deployment dep;
    ChannelSet ch;
};

Scene make_scene(int devices)
{
    Scene s;
    s.cfg.num_devices = devices;
    s.cfg.blocks = 200;
    RandomSource rng = trial_stream(s.cfg, 0, StreamPurpose::deployment);
    s.dep = sample_deployment(s.cfg, rng);
    s.ch = build_channels(s.dep, ArrayGeometry::from_config(s.cfg));
    return s;
}

void BM_Music(benchmark::State& state)
{
    const Scene s = make_scene(static_cast<int>(state.range(0)));
    const AngleGrid grid(s.cfg.n_rx, s.cfg.music_step_deg);
    const SensingDesign d = design_sensing(s.cfg.n_tx, 60, s.cfg.pt_watts());
    RandomSource noise(5, 0);
    const EchoFrame e = synthesize_echo(s.dep, s.ch, d.waveform, s.cfg.sigma2_watts(), noise);
    for (auto _ : state) benchmark::DoNotOptimize(music_estimate_aoas(e, s.cfg.num_devices, grid));
}
BENCHMARK(BM_Music)->Arg(2)->Arg(4);

void BM_SolveMaxmin(benchmark::State& state)
{
    const Scene s = make_scene(static_cast<int>(state.range(0)));
    std::vector<double> angles, weights;
    for (const auto& d : s.dep.devices) {
        angles.push_back(d.theta);
        weights.push_back(std::abs(d.alpha));
    }
    const auto h = los_charging_matrices(angles, weights, s.cfg.n_total);
    for (auto _ : state) benchmark::DoNotOptimize(solve_maxmin(h, s.cfg.pt_watts()));
}
BENCHMARK(BM_SolveMaxmin)->Arg(2)->Arg(4)->Arg(6);

void BM_RunStc(benchmark::State& state)
{
    const Scene s = make_scene(2);
    const AngleGrid grid(s.cfg.n_rx, s.cfg.music_step_deg);
    const double gamma = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        RandomSource noise = trial_stream(s.cfg, 0, StreamPurpose::echo_noise);
        benchmark::DoNotOptimize(run_stc(s.cfg, grid, s.dep, s.ch, gamma, noise));
    }
}
BENCHMARK(BM_RunStc)->Arg(15)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
