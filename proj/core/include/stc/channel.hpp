#pragma once

#include <vector>

#include "stc/numerics.hpp"
#include "stc/system_config.hpp"

namespace stc {

/// Half-wavelength ULA split into a sensing transmit sub-array (the first
/// n_tx elements) and a sensing receive sub-array (the last n_rx elements).
struct ArrayGeometry {
    int n_total = 0;
    int n_tx = 0;
    int n_rx = 0;
    double wavelength = 0.0;

    static ArrayGeometry from_config(const SystemConfig& cfg);

    /// Element index of the first receive antenna.
    int rx_anchor() const { return n_tx; }
};

/// a_m(theta) = exp(-j*pi*(anchor + m)*sin(theta)), m = 0..n-1.
CVector steering_vector(double theta, int n, int anchor = 0);

/// Free-space amplitude gain lambda / (4*pi*d).
double path_gain(double distance, double wavelength);

/// h = sqrt(kappa/(kappa+1)) a(theta) + sqrt(1/(kappa+1)) b. An infinite
/// kappa yields the pure line-of-sight vector.
CVector rician_channel(double theta, double kappa, int n, const CVector& nlos);

struct Device {
    double theta = 0.0;     // rad
    double distance = 0.0;  // m
    double path_gain = 0.0;
    cplx rcs;
    cplx alpha;  // rcs * path_gain^2
    CVector nlos;  // n_total entries
};

/// Ground truth for one realization.
struct Deployment {
    std::vector<Device> devices;
    double kappa = 0.0;  // linear

    int size() const { return static_cast<int>(devices.size()); }
};

Deployment sample_deployment(const SystemConfig& cfg, RandomSource& rng);

struct DeviceChannel {
    CVector full;    // h_k, n_total entries
    CVector tx;      // first n_tx entries
    CVector rx;      // last n_rx entries
    CVector scaled;  // beta_k * h_k
};

struct ChannelSet {
    std::vector<DeviceChannel> devices;
};

ChannelSet build_channels(const Deployment& dep, const ArrayGeometry& geom);

}  // namespace stc
