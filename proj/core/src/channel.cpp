#include "stc/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace stc {

ArrayGeometry ArrayGeometry::from_config(const SystemConfig& cfg)
{
    return {cfg.n_total, cfg.n_tx, cfg.n_rx, cfg.wavelength};
}

CVector steering_vector(double theta, int n, int anchor)
{
    if (n < 1) throw ContractViolation("steering_vector: n must be >= 1");
    if (std::abs(theta) > std::numbers::pi / 2 + 1e-12) {
        throw ContractViolation("steering_vector: |theta| must not exceed pi/2");
    }
    const double phase = -std::numbers::pi * std::sin(theta);
    CVector a(n);
    for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, phase * (anchor + m));
    return a;
}

double path_gain(double distance, double wavelength)
{
    if (!(distance > 0.0)) throw DomainError("path_gain: distance must be positive");
    return wavelength / (4.0 * std::numbers::pi * distance);
}

CVector rician_channel(double theta, double kappa, int n, const CVector& nlos)
{
    if (!(kappa >= 0.0)) throw ContractViolation("rician_channel: kappa must be nonnegative");
    if (nlos.size() != n) throw ContractViolation("rician_channel: NLoS length mismatch");
    const CVector a = steering_vector(theta, n, 0);
    if (std::isinf(kappa)) return a;
    const double los = std::sqrt(kappa / (kappa + 1.0));
    const double scat = std::sqrt(1.0 / (kappa + 1.0));
    return los * a + scat * nlos;
}

Deployment sample_deployment(const SystemConfig& cfg, RandomSource& rng)
{
    const int k = cfg.num_devices;
    if (k < 1) throw ContractViolation("sample_deployment: need at least one device");

    Deployment dep;
    dep.kappa = cfg.kappa_linear();
    dep.devices.resize(k);
    for (auto& d : dep.devices) d.theta = rng.uniform(cfg.theta_min, cfg.theta_max);
    for (auto& d : dep.devices) d.distance = rng.uniform(cfg.dist_min, cfg.dist_max);

    // Targets share one reflectivity draw.
    const cplx rho = rng.complex_normal(1.0);
    for (auto& d : dep.devices) {
        d.path_gain = path_gain(d.distance, cfg.wavelength);
        d.rcs = rho;
        d.alpha = rho * d.path_gain * d.path_gain;
    }
    for (auto& d : dep.devices) d.nlos = draw_complex_gaussian(rng, cfg.n_total, 1.0);
    return dep;
}

ChannelSet build_channels(const Deployment& dep, const ArrayGeometry& geom)
{
    if (geom.n_tx + geom.n_rx != geom.n_total) {
        throw ContractViolation("build_channels: n_tx + n_rx must equal n_total");
    }
    ChannelSet set;
    set.devices.reserve(dep.devices.size());
    for (const auto& d : dep.devices) {
        DeviceChannel ch;
        ch.full = rician_channel(d.theta, dep.kappa, geom.n_total, d.nlos);
        ch.tx = ch.full.head(geom.n_tx);
        ch.rx = ch.full.tail(geom.n_rx);
        ch.scaled = d.path_gain * ch.full;
        set.devices.push_back(std::move(ch));
    }
    return set;
}

}  // namespace stc
