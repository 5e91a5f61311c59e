#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error hierarchy shared by every module.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative routine failed to converge.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A linear system is too ill-conditioned to be solved without regularization.
class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Throws ContractViolation when any entry is NaN or infinite.
void require_finite(const CMatrix& m, const char* what);

/// ‖M − Mᴴ‖_F / ‖M‖_F (0 for the zero matrix).
double hermitian_defect(const CMatrix& m);

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

struct HermitianEig {
    RVector values;   // descending
    CMatrix vectors;  // columns are orthonormal eigenvectors, same order as values
};

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Rejects inputs whose relative Hermitian defect exceeds
/// 1e-10.
HermitianEig hermitian_eig(const CMatrix& m);

// ---------------------------------------------------------------------------
// Least squares
// ---------------------------------------------------------------------------

/// Condition number above which an unregularized solve is refused.
inline constexpr double kMaxLsCondition = 1e10;

/// Minimizes ‖A x − y‖² + ridge·‖x‖². With ridge = 0 a rank-deficient or
/// badly conditioned A raises IllConditioned carrying the condition estimate.
CVector ls_solve(const CMatrix& a, const CVector& y, double ridge = 0.0);

/// Same minimizer, expressed through the normal equations
/// (gram + ridge·I) x = rhs where gram = AᴴA and rhs = Aᴴy. Used when the
/// caller can form AᴴA from structure without materializing A. The
/// condition test is applied to sqrt(cond(gram)), i.e. to cond(A).
CVector ls_solve_normal(const CMatrix& gram, const CVector& rhs, double ridge = 0.0);

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Seedable random stream. Identical (seed, stream) pairs replay identical
/// sequences; distinct stream ids are decorrelated through std::seed_seq.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    double uniform(double lo, double hi);
    double normal();  // standard real normal
    cplx complex_normal(double variance);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives a stream id from a trial index and a purpose tag so that every
/// (trial, purpose) pair gets its own independent stream.
std::uint64_t stream_id(std::uint64_t trial, std::uint64_t purpose);

/// n i.i.d. circularly symmetric complex Gaussian entries of the given total
/// variance (each quadrature carries variance/2).
CVector draw_complex_gaussian(RandomSource& rng, Eigen::Index n, double variance);

}  // namespace stc
