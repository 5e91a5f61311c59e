#include "stc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stc {

namespace {

constexpr double kHermitianTol = 1e-10;

// Normal equations square the condition number, so the admissible cond(A)
// is the square root of what double precision tolerates on the Gram matrix.
constexpr double kMaxNormalCondition = 1e6;

}  // namespace

void require_finite(const CMatrix& m, const char* what)
{
    if (!m.allFinite()) {
        throw ContractViolation(std::string(what) + ": non-finite entry");
    }
}

double hermitian_defect(const CMatrix& m)
{
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint()).norm() / scale;
}

HermitianEig hermitian_eig(const CMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw ContractViolation("hermitian_eig: matrix is not square");
    }
    require_finite(m, "hermitian_eig");
    if (hermitian_defect(m) > kHermitianTol) {
        throw ContractViolation("hermitian_eig: matrix is not Hermitian");
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("hermitian_eig: eigensolver did not converge");
    }
    // Eigen returns ascending order.
    HermitianEig out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

CVector ls_solve(const CMatrix& a, const CVector& y, double ridge)
{
    if (a.rows() < a.cols()) {
        throw ContractViolation("ls_solve: system is underdetermined (m < n)");
    }
    if (y.size() != a.rows()) {
        throw ContractViolation("ls_solve: right-hand side length mismatch");
    }
    if (!(ridge >= 0.0)) {
        throw ContractViolation("ls_solve: ridge must be nonnegative");
    }
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();

    if (ridge > 0.0) {
        CMatrix aug(m + n, n);
        aug.topRows(m) = a;
        aug.bottomRows(n) = std::sqrt(ridge) * CMatrix::Identity(n, n);
        CVector rhs = CVector::Zero(m + n);
        rhs.head(m) = y;
        return aug.colPivHouseholderQr().solve(rhs);
    }

    Eigen::ColPivHouseholderQR<CMatrix> qr(a);
    const CMatrix r = qr.matrixR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
    const RVector sv = Eigen::JacobiSVD<CMatrix>(r).singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxLsCondition)) {
        std::ostringstream msg;
        msg << "ls_solve: ill-conditioned system (cond ~ " << cond << ")";
        throw IllConditioned(msg.str(), cond);
    }
    return qr.solve(y);
}

CVector ls_solve_normal(const CMatrix& gram, const CVector& rhs, double ridge)
{
    if (gram.rows() != gram.cols() || rhs.size() != gram.rows()) {
        throw ContractViolation("ls_solve_normal: dimension mismatch");
    }
    if (!(ridge >= 0.0)) {
        throw ContractViolation("ls_solve_normal: ridge must be nonnegative");
    }
    const Eigen::Index n = gram.rows();
    const CMatrix sym = 0.5 * (gram + gram.adjoint());
    if (ridge == 0.0) {
        const RVector ev = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly)
                               .eigenvalues();
        const double emax = ev(n - 1);
        const double emin = ev(0);
        const double cond = emin > 0.0 ? std::sqrt(emax / emin)
                                       : std::numeric_limits<double>::infinity();
        if (!(cond <= kMaxNormalCondition)) {
            std::ostringstream msg;
            msg << "ls_solve_normal: ill-conditioned system (cond ~ " << cond << ")";
            throw IllConditioned(msg.str(), cond);
        }
    }
    const CMatrix reg = sym + ridge * CMatrix::Identity(n, n);
    return reg.ldlt().solve(rhs);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double RandomSource::uniform(double lo, double hi)
{
    if (lo == hi) return lo;
    // 53 random mantissa bits; avoids the implementation-defined
    // std::uniform_real_distribution so draws replay across standard libraries.
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double RandomSource::normal()
{
    return normal_(engine_);
}

cplx RandomSource::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::uint64_t stream_id(std::uint64_t trial, std::uint64_t purpose)
{
    return (trial << 8) | (purpose & 0xff);
}

CVector draw_complex_gaussian(RandomSource& rng, Eigen::Index n, double variance)
{
    if (!(variance >= 0.0)) {
        throw ContractViolation("draw_complex_gaussian: variance must be nonnegative");
    }
    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = rng.complex_normal(variance);
    return out;
}

}  // namespace stc
