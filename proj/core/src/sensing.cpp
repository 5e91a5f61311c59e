#include "stc/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace stc {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio

// ‖a‖² − ‖U_sᴴ a‖², the MUSIC null-spectrum denominator.
double null_spectrum(const CMatrix& signal_basis, const CVector& a)
{
    const double total = a.squaredNorm();
    const double in_signal = (signal_basis.adjoint() * a).squaredNorm();
    return std::max(total - in_signal, 0.0);
}

double golden_minimize(const CMatrix& signal_basis, int n_rx, double lo, double hi)
{
    auto f = [&](double th) { return null_spectrum(signal_basis, steering_vector(th, n_rx)); };
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-11) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CMatrix SensingDesign::sample_covariance() const
{
    return waveform * waveform.adjoint() / static_cast<double>(length());
}

SensingDesign design_sensing(int n_tx, int length, double power)
{
    if (n_tx < 1) throw ContractViolation("design_sensing: n_tx must be >= 1");
    if (length < n_tx) {
        throw InfeasibleDesign("design_sensing: L_s < n_tx, orthogonal symbols impossible");
    }
    if (!(power >= 0.0)) throw ContractViolation("design_sensing: power must be nonnegative");

    SensingDesign d;
    d.power = power;
    d.beamformer = std::sqrt(power / n_tx) * CMatrix::Identity(n_tx, n_tx);
    d.symbols.resize(n_tx, length);
    for (int l = 0; l < length; ++l) {
        for (int i = 0; i < n_tx; ++i) {
            // Reduce the exponent modulo L_s so phases stay accurate for long frames.
            const long long idx = (static_cast<long long>(i) * l) % length;
            d.symbols(i, l) = std::polar(1.0, -2.0 * std::numbers::pi * idx / length);
        }
    }
    d.waveform = d.beamformer * d.symbols;
    return d;
}

double crb_of_design(const CMatrix& rx_cov, double sigma2, int n_rx, int length)
{
    if (rx_cov.rows() != rx_cov.cols()) throw ContractViolation("crb_of_design: R_x not square");
    Eigen::LLT<CMatrix> llt(0.5 * (rx_cov + rx_cov.adjoint()));
    if (llt.info() != Eigen::Success) {
        throw DomainError("crb_of_design: R_x is not positive definite");
    }
    const CMatrix inv = llt.solve(CMatrix::Identity(rx_cov.rows(), rx_cov.cols()));
    return sigma2 * n_rx / length * inv.trace().real();
}

EchoFrame synthesize_echo(const Deployment& dep, const ChannelSet& ch, const CMatrix& waveform,
                          double sigma2, RandomSource& rng)
{
    if (ch.devices.size() != dep.devices.size()) {
        throw ContractViolation("synthesize_echo: deployment/channel size mismatch");
    }
    if (ch.devices.empty()) throw ContractViolation("synthesize_echo: no devices");
    const Eigen::Index n_rx = ch.devices.front().rx.size();
    const Eigen::Index n_tx = ch.devices.front().tx.size();
    if (waveform.rows() != n_tx) throw ContractViolation("synthesize_echo: waveform rows != n_tx");

    CMatrix g = CMatrix::Zero(n_rx, n_tx);
    for (std::size_t k = 0; k < dep.devices.size(); ++k) {
        g += dep.devices[k].alpha * ch.devices[k].rx * ch.devices[k].tx.transpose();
    }
    EchoFrame echo;
    echo.sigma2 = sigma2;
    echo.y = g * waveform;
    if (sigma2 > 0.0) {
        for (Eigen::Index l = 0; l < echo.y.cols(); ++l) {
            echo.y.col(l) += draw_complex_gaussian(rng, n_rx, sigma2);
        }
    }
    return echo;
}

AngleGrid::AngleGrid(int n_rx, double step_deg) : n_rx_(n_rx), step_(deg2rad(step_deg))
{
    if (n_rx < 1) throw ContractViolation("AngleGrid: n_rx must be >= 1");
    if (!(step_deg > 0.0)) throw ContractViolation("AngleGrid: step must be positive");
    const double half = std::numbers::pi / 2;
    const int count = static_cast<int>(std::floor(2.0 * half / step_ + 1e-9)) + 1;
    angles_.reserve(count);
    for (int i = 0; i < count; ++i) angles_.push_back(std::min(-half + i * step_, half));
    steering_.resize(n_rx, count);
    for (int i = 0; i < count; ++i) steering_.col(i) = steering_vector(angles_[i], n_rx);
}

MusicEstimate music_estimate_aoas(const EchoFrame& echo, int num_targets, const AngleGrid& grid)
{
    const int n_rx = static_cast<int>(echo.y.rows());
    if (n_rx != grid.n_rx()) throw ContractViolation("music: grid built for another n_rx");
    if (num_targets < 1 || num_targets >= n_rx) {
        throw ContractViolation("music: need 1 <= K < n_rx");
    }
    const double len = static_cast<double>(echo.y.cols());
    const CMatrix ry = echo.y * echo.y.adjoint() / len;
    const HermitianEig eig = hermitian_eig(ry);
    const CMatrix signal = eig.vectors.leftCols(num_targets);

    const auto& angles = grid.angles();
    const std::size_t count = angles.size();
    std::vector<double> null(count);
    const RVector proj = (signal.adjoint() * grid.steering()).colwise().squaredNorm();
    for (std::size_t i = 0; i < count; ++i) {
        null[i] = std::max(static_cast<double>(n_rx) - proj(static_cast<Eigen::Index>(i)), 0.0);
    }

    MusicEstimate out;
    out.eigenvalues = eig.values;
    out.spectrum.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.spectrum.push_back(
            {angles[i], 1.0 / std::max(null[i], std::numeric_limits<double>::min())});
    }

    // A spectrum flat to round-off (e.g. an all-zero echo) has no real peaks.
    const auto [lo_it, hi_it] = std::minmax_element(null.begin(), null.end());
    const bool flat = *hi_it - *lo_it <= 1e-9 * n_rx;
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; !flat && i + 1 < count; ++i) {
        if (null[i] < null[i - 1] && null[i] < null[i + 1]) peaks.push_back(i);
    }
    auto by_height = [&](std::size_t a, std::size_t b) {
        return null[a] < null[b] || (null[a] == null[b] && a < b);
    };
    std::sort(peaks.begin(), peaks.end(), by_height);
    if (peaks.size() > static_cast<std::size_t>(num_targets)) peaks.resize(num_targets);

    const double half = std::numbers::pi / 2;
    for (std::size_t idx : peaks) {
        const double lo = std::max(angles[idx] - grid.step(), -half);
        const double hi = std::min(angles[idx] + grid.step(), half);
        out.angles.push_back(golden_minimize(signal, n_rx, lo, hi));
    }

    if (peaks.size() < static_cast<std::size_t>(num_targets)) {
        out.degraded = true;
        std::vector<std::size_t> rest(count);
        std::iota(rest.begin(), rest.end(), 0);
        std::erase_if(rest, [&](std::size_t i) {
            return std::find(peaks.begin(), peaks.end(), i) != peaks.end();
        });
        std::sort(rest.begin(), rest.end(), by_height);
        for (std::size_t i = 0; out.angles.size() < static_cast<std::size_t>(num_targets); ++i) {
            out.angles.push_back(angles[rest[i]]);
        }
    }
    return out;
}

CoefficientEstimate estimate_coefficients(const EchoFrame& echo, const CMatrix& waveform,
                                          const std::vector<double>& angles, int rx_anchor,
                                          double ridge)
{
    const Eigen::Index k = static_cast<Eigen::Index>(angles.size());
    const Eigen::Index n_rx = echo.y.rows();
    const Eigen::Index n_tx = waveform.rows();
    const Eigen::Index len = waveform.cols();
    if (k < 1) throw ContractViolation("estimate_coefficients: no angles");
    if (echo.y.cols() != len) throw ContractViolation("estimate_coefficients: frame length mismatch");
    if (len * n_rx < k * k) {
        throw ContractViolation("estimate_coefficients: L_s * n_rx < K^2, model unidentifiable");
    }

    CMatrix h_tx(n_tx, k);
    CMatrix h_rx(n_rx, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        h_tx.col(i) = steering_vector(angles[i], static_cast<int>(n_tx), 0);
        h_rx.col(i) = steering_vector(angles[i], static_cast<int>(n_rx), rx_anchor);
    }
    const CMatrix b = h_tx.transpose() * waveform;  // K x L_s

    // B̄ = Bᵀ ⊗ H_r has Gram (conj(B) Bᵀ) ⊗ (H_rᴴ H_r) and B̄ᴴ vec(Y) = vec(H_rᴴ Y Bᴴ),
    // so the K²-unknown system never needs the (L_s n_rx) x K² matrix itself.
    const CMatrix left = b.conjugate() * b.transpose();
    const CMatrix right = h_rx.adjoint() * h_rx;
    CMatrix gram(k * k, k * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) gram.block(i * k, j * k, k, k) = left(i, j) * right;
    }
    const CMatrix rhs_mat = h_rx.adjoint() * echo.y * b.adjoint();
    const CVector rhs = Eigen::Map<const CVector>(rhs_mat.data(), k * k);

    CoefficientEstimate out;
    CVector vec_c;
    if (ridge > 0.0) {
        vec_c = ls_solve_normal(gram, rhs, ridge);
        out.regularized = true;
    } else {
        try {
            vec_c = ls_solve_normal(gram, rhs, 0.0);
        } catch (const IllConditioned&) {
            // ‖B̄‖_F² = tr(B̄ᴴB̄)
            vec_c = ls_solve_normal(gram, rhs, 1e-8 * gram.trace().real());
            out.regularized = true;
        }
    }
    out.alphas.reserve(k);
    for (Eigen::Index i = 0; i < k; ++i) out.alphas.push_back(vec_c(i * k + i));
    return out;
}

}  // namespace stc
