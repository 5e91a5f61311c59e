#include "stc/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxmin_sdp.hpp"

namespace stc {

namespace {

constexpr double kSpanTol = 1e-12;
constexpr double kRankTol = 1e-6;

double re_trace(const CMatrix& a, const CMatrix& b)
{
    return (a.transpose().array() * b.array()).sum().real();
}

}  // namespace

double received_power(const CVector& h_scaled, const CMatrix& beams)
{
    if (beams.rows() != h_scaled.size()) {
        throw ContractViolation("received_power: channel/beam dimension mismatch");
    }
    return (beams.adjoint() * h_scaled).squaredNorm();
}

CMatrix isotropic_beamformer(int n, double power)
{
    return std::sqrt(power / n) * CMatrix::Identity(n, n);
}

BeamSet extract_beams(const CMatrix& covariance, int count)
{
    if (count < 1) throw ContractViolation("extract_beams: need at least one beam");
    const HermitianEig eig = hermitian_eig(covariance);
    const Eigen::Index n = covariance.rows();
    BeamSet out;
    out.beams = CMatrix::Zero(n, count);
    const Eigen::Index used = std::min<Eigen::Index>(n, count);
    for (Eigen::Index i = 0; i < used; ++i) {
        out.beams.col(i) = std::sqrt(std::max(eig.values(i), 0.0)) * eig.vectors.col(i);
    }
    if (n > count) {
        const double lead = std::max(eig.values(0), 0.0);
        out.excess_rank = eig.values(count) > kRankTol * lead;
    }
    return out;
}

BeamSolution solve_maxmin(const std::vector<CMatrix>& charging, double power)
{
    const int k = static_cast<int>(charging.size());
    if (k < 1) throw ContractViolation("solve_maxmin: need at least one device");
    if (!(power > 0.0)) throw ContractViolation("solve_maxmin: power must be positive");
    const Eigen::Index n = charging.front().rows();
    for (const auto& h : charging) {
        if (h.rows() != n || h.cols() != n) {
            throw ContractViolation("solve_maxmin: charging matrices must be N x N");
        }
        require_finite(h, "solve_maxmin");
    }

    // Trace mass outside the joint range of the H_k is wasted, so solve in it.
    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& h : charging) total += h;
    const HermitianEig span = hermitian_eig(total);
    if (!(span.values(0) > 0.0)) {
        throw DegenerateProblem("solve_maxmin: every charging matrix is zero");
    }
    Eigen::Index r = 0;
    while (r < n && span.values(r) > kSpanTol * span.values(0)) ++r;
    const CMatrix basis = span.vectors.leftCols(r);

    std::vector<CMatrix> reduced(k);
    double scale = 0.0;
    for (int i = 0; i < k; ++i) {
        reduced[i] = basis.adjoint() * charging[i] * basis;
        reduced[i] = 0.5 * (reduced[i] + reduced[i].adjoint()).eval();
        scale = std::max(scale, reduced[i].trace().real());
    }
    std::vector<int> active;
    std::vector<CMatrix> active_g;
    for (int i = 0; i < k; ++i) {
        reduced[i] /= scale;
        if (reduced[i].trace().real() > kSpanTol) {
            active.push_back(i);
            active_g.push_back(reduced[i]);
        }
    }

    const detail::MinTraceResult sdp = detail::solve_min_trace(active_g);

    // Clip round-off negatives, then meet the power budget exactly.
    const HermitianEig veig = hermitian_eig(0.5 * (sdp.v + sdp.v.adjoint()));
    const RVector clipped = veig.values.cwiseMax(0.0);
    CMatrix v = veig.vectors * clipped.cast<cplx>().asDiagonal() * veig.vectors.adjoint();
    v *= power / v.trace().real();

    BeamSolution sol;
    sol.covariance = basis * v * basis.adjoint();
    sol.covariance = 0.5 * (sol.covariance + sol.covariance.adjoint()).eval();
    sol.diagnostics = sdp.diag;

    sol.device_power.resize(k);
    sol.t_star = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        sol.device_power[i] = re_trace(sol.covariance, charging[i]);
        sol.t_star = std::min(sol.t_star, sol.device_power[i]);
    }

    double ysum = 0.0;
    for (double y : sdp.y) ysum += std::max(y, 0.0);
    sol.dual_weights.assign(k, 0.0);
    for (std::size_t j = 0; j < active.size(); ++j) {
        sol.dual_weights[active[j]] = ysum > 0.0 ? std::max(sdp.y[j], 0.0) / ysum : 0.0;
    }
    sol.kkt_residual.assign(k, 0.0);
    if (sol.t_star > 0.0) {
        for (int i = 0; i < k; ++i) {
            sol.kkt_residual[i] =
                sol.dual_weights[i] * (sol.device_power[i] - sol.t_star) / sol.t_star;
        }
    }

    BeamSet beams = extract_beams(sol.covariance, k);
    sol.beams = std::move(beams.beams);
    sol.excess_rank = beams.excess_rank;
    return sol;
}

std::vector<CMatrix> los_charging_matrices(const std::vector<double>& angles,
                                           const std::vector<double>& weights, int n_total)
{
    if (angles.size() != weights.size()) {
        throw ContractViolation("los_charging_matrices: angle/weight count mismatch");
    }
    std::vector<CMatrix> out;
    out.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const CVector a = steering_vector(angles[i], n_total);
        out.push_back(weights[i] * (a * a.adjoint()));
    }
    return out;
}

BeamSolution pk_benchmark(const Deployment& dep, int n_total, double power)
{
    std::vector<double> angles;
    std::vector<double> weights;
    for (const auto& d : dep.devices) {
        angles.push_back(d.theta);
        weights.push_back(d.path_gain * d.path_gain);
    }
    return solve_maxmin(los_charging_matrices(angles, weights, n_total), power);
}

double isotropic_block_power(const CVector& channel, double beta, double power)
{
    const int n = static_cast<int>(channel.size());
    return received_power(beta * channel, isotropic_beamformer(n, power));
}

double aa_is_power(const CVector& channel, double beta, double power, int blocks)
{
    return static_cast<double>(blocks) * isotropic_block_power(channel, beta, power);
}

}  // namespace stc
