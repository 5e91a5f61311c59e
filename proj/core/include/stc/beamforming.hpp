#pragma once

#include <vector>

#include "stc/channel.hpp"
#include "stc/numerics.hpp"

namespace stc {

/// All charging matrices are zero, so every beamformer scores zero.
class DegenerateProblem : public Error {
public:
    using Error::Error;
};

/// Interior-point diagnostics of the reduced max-min program.
struct SdpDiagnostics {
    int iterations = 0;
    int reduced_dim = 0;          // dimension of the span the program was solved in
    double primal_residual = 0.0;  // relative
    double dual_residual = 0.0;    // relative
    double gap = 0.0;              // relative duality gap
};

struct BeamSolution {
    CMatrix covariance;  // W, N x N PSD
    CMatrix beams;       // N x K, columns w_i with sum w_i w_i^H = W
    double t_star = 0.0;
    std::vector<double> device_power;  // tr(W H_k)
    std::vector<double> dual_weights;  // normalized to sum 1; ~0 marks a dominated device
    std::vector<double> kkt_residual;  // per-device complementary-slackness violation
    SdpDiagnostics diagnostics;
    bool excess_rank = false;  // rank(W) > K, beams only approximate W
};

/// sum_i |h^H w_i|^2 over the columns of beams.
double received_power(const CVector& h_scaled, const CMatrix& beams);

/// sqrt(P/n) * I, the isotropic transmit covariance factor.
CMatrix isotropic_beamformer(int n, double power);

/// Max-min received power: maximize t s.t. t <= tr(W H_k), tr(W) <= P, W >= 0.
/// Returns W with tr(W) = P and K beams extracted from it.
BeamSolution solve_maxmin(const std::vector<CMatrix>& charging, double power);

struct BeamSet {
    CMatrix beams;  // N x K
    bool excess_rank = false;
};

/// w_i = sqrt(lambda_i) u_i for the K leading eigenpairs of W (zero-padded
/// when rank(W) < K).
BeamSet extract_beams(const CMatrix& covariance, int count);

/// H_k = |alpha_k| a(theta_k) a(theta_k)^H for every device.
std::vector<CMatrix> los_charging_matrices(const std::vector<double>& angles,
                                           const std::vector<double>& weights, int n_total);

/// Perfect-knowledge genie: the max-min program on the true angles with
/// beta_k^2 weights.
BeamSolution pk_benchmark(const Deployment& dep, int n_total, double power);

/// Per-block power a device harvests from an isotropic transmission on the
/// given (sub)channel, beta^2 * |h^H (sqrt(P/n) I)|^2.
double isotropic_block_power(const CVector& channel, double beta, double power);

/// All-antennas independent-symbols benchmark over L blocks.
double aa_is_power(const CVector& channel, double beta, double power, int blocks);

}  // namespace stc
