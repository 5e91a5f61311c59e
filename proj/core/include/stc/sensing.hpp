#pragma once

#include <utility>
#include <vector>

#include "stc/channel.hpp"
#include "stc/numerics.hpp"

namespace stc {

class InfeasibleDesign : public Error {
public:
    using Error::Error;
};

/// Isotropic sensing waveform X = W * S with S S^H / L_s = I.
struct SensingDesign {
    CMatrix beamformer;  // n_tx x n_tx, sqrt(P_t/n_tx) * I
    CMatrix symbols;     // n_tx x L_s, unit-modulus DFT rows
    CMatrix waveform;    // beamformer * symbols
    double power = 0.0;  // per-block budget P_t [W]

    int n_tx() const { return static_cast<int>(beamformer.rows()); }
    int length() const { return static_cast<int>(symbols.cols()); }
    /// X X^H / L_s.
    CMatrix sample_covariance() const;
};

SensingDesign design_sensing(int n_tx, int length, double power);

/// (sigma2 * n_rx / L_s) * tr(R_x^{-1}).
double crb_of_design(const CMatrix& rx_cov, double sigma2, int n_rx, int length);

struct EchoFrame {
    CMatrix y;  // n_rx x L_s
    double sigma2 = 0.0;
};

/// Y = (sum_k alpha_k h_{k,r} h_{k,t}^T) X + Z, Z ~ CN(0, sigma2) drawn
/// column by column so a shorter frame is a prefix of a longer one.
EchoFrame synthesize_echo(const Deployment& dep, const ChannelSet& ch, const CMatrix& waveform,
                          double sigma2, RandomSource& rng);

/// Uniform MUSIC search grid over [-pi/2, pi/2] with precomputed
/// receive steering vectors (anchored at element 0 of the receive array).
class AngleGrid {
public:
    AngleGrid(int n_rx, double step_deg);

    int n_rx() const { return n_rx_; }
    double step() const { return step_; }  // rad
    const std::vector<double>& angles() const { return angles_; }
    const CMatrix& steering() const { return steering_; }

private:
    int n_rx_;
    double step_;
    std::vector<double> angles_;
    CMatrix steering_;  // n_rx x angles
};

struct SpectrumSample {
    double theta = 0.0;  // rad
    double power = 0.0;  // 1 / (a^H U_n U_n^H a)
};

struct MusicEstimate {
    std::vector<double> angles;  // K entries, strongest peak first
    std::vector<SpectrumSample> spectrum;
    RVector eigenvalues;  // of R_y, descending
    bool degraded = false;  // fewer than K peaks were found
};

MusicEstimate music_estimate_aoas(const EchoFrame& echo, int num_targets, const AngleGrid& grid);

struct CoefficientEstimate {
    std::vector<cplx> alphas;
    bool regularized = false;  // the ridge fallback was needed
};

/// Least-squares reflection coefficients from the vectorized echo model
/// vec(Y) = (B^T kron H_r) vec(C), B = H_t^T X, returning diag(C).
/// Steering vectors are rebuilt at the estimated angles; the receive ones
/// are phase-referenced at element rx_anchor of the full array.
CoefficientEstimate estimate_coefficients(const EchoFrame& echo, const CMatrix& waveform,
                                          const std::vector<double>& angles, int rx_anchor,
                                          double ridge = 0.0);

struct TargetEstimates {
    std::vector<double> angles;
    std::vector<cplx> alphas;
    std::vector<SpectrumSample> spectrum;
    bool degraded = false;
    bool regularized = false;
};

}  // namespace stc
