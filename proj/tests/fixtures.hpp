#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "stc/channel.hpp"
#include "stc/numerics.hpp"
#include "stc/system_config.hpp"

namespace fixtures {

inline constexpr double kPi = 3.14159265358979323846;

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}

inline double rel_err(const stc::CMatrix& got, const stc::CMatrix& want)
{
    return (got - want).norm() / want.norm();
}

inline stc::CMatrix random_matrix(stc::RandomSource& rng, int rows, int cols)
{
    stc::CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j) m.col(j) = stc::draw_complex_gaussian(rng, rows, 1.0);
    return m;
}

inline stc::CMatrix random_hermitian(stc::RandomSource& rng, int n)
{
    const stc::CMatrix a = random_matrix(rng, n, n);
    return 0.5 * (a + a.adjoint());
}

/// Pure line-of-sight devices at the given angles and distances sharing one RCS.
inline stc::Deployment los_deployment(const std::vector<double>& angles,
                                      const std::vector<double>& distances, stc::cplx rcs,
                                      int n_total, double wavelength = stc::kSpeedOfLight / 2.4e9)
{
    stc::Deployment dep;
    dep.kappa = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < angles.size(); ++i) {
        stc::Device d;
        d.theta = angles[i];
        d.distance = distances[i];
        d.path_gain = stc::path_gain(d.distance, wavelength);
        d.rcs = rcs;
        d.alpha = rcs * d.path_gain * d.path_gain;
        d.nlos = stc::CVector::Zero(n_total);
        dep.devices.push_back(d);
    }
    return dep;
}

/// Noiseless pure-LoS configuration for oracle tests.
inline stc::SystemConfig clean_config(int n_tx, int n_rx, int devices, int blocks = 200)
{
    stc::SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rx = n_rx;
    cfg.n_total = n_tx + n_rx;
    cfg.num_devices = devices;
    cfg.blocks = blocks;
    cfg.pt_dbm = 10.0;
    cfg.sigma2_dbm = -std::numeric_limits<double>::infinity();
    cfg.kappa_db = std::numeric_limits<double>::infinity();
    return cfg;
}

}  // namespace fixtures
