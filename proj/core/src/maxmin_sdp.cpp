#include "maxmin_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stc::detail {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kTolerance = 1e-10;
constexpr int kStallLimit = 4;
constexpr double kAcceptable = 1e-8;
constexpr double kStepFraction = 0.98;

double re_trace_product(const CMatrix& a, const CMatrix& b)
{
    // Re tr(A B) without forming the product.
    return (a.transpose().array() * b.array()).sum().real();
}

// Largest alpha with X + alpha D still PSD, for X positive definite.
double max_step(const CMatrix& x, const CMatrix& d)
{
    Eigen::LLT<CMatrix> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    const CMatrix linv_d = llt.matrixL().solve(d);
    const CMatrix scaled = llt.matrixL().solve(linv_d.adjoint()).adjoint();
    const CMatrix sym = 0.5 * (scaled + scaled.adjoint());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step(const RVector& x, const RVector& d)
{
    double alpha = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (d(i) < 0.0) alpha = std::min(alpha, -x(i) / d(i));
    }
    return alpha;
}

struct Direction {
    CMatrix dv;
    RVector ds;
    RVector dy;
    CMatrix dz_mat;
    RVector dz;
};

}  // namespace

MinTraceResult solve_min_trace(const std::vector<CMatrix>& g)
{
    const Eigen::Index k = static_cast<Eigen::Index>(g.size());
    if (k == 0) throw ContractViolation("solve_min_trace: no constraints");
    const Eigen::Index r = g.front().rows();
    const double n_cone = static_cast<double>(r + k);
    const CMatrix eye = CMatrix::Identity(r, r);

    double min_tr = std::numeric_limits<double>::infinity();
    for (const auto& gk : g) min_tr = std::min(min_tr, gk.trace().real());
    if (!(min_tr > 0.0)) throw ContractViolation("solve_min_trace: zero constraint matrix");

    // Infeasible start, strictly inside the cones.
    CMatrix v = (2.0 / min_tr) * eye;
    RVector s = RVector::Ones(k);
    RVector y = RVector::Zero(k);
    CMatrix zm = eye;
    RVector z = RVector::Ones(k);

    MinTraceResult out;
    MinTraceResult best;
    double best_err = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int iter = 0;; ++iter) {
        RVector rp(k);
        CMatrix sum_yg = CMatrix::Zero(r, r);
        for (Eigen::Index i = 0; i < k; ++i) {
            rp(i) = 1.0 - re_trace_product(g[i], v) + s(i);
            sum_yg += y(i) * g[i];
        }
        const CMatrix rd = eye - zm - sum_yg;
        const RVector rdz = y - z;
        const double mu = (re_trace_product(v, zm) + s.dot(z)) / n_cone;
        const double pobj = v.trace().real();
        const double dobj = y.sum();

        out.diag.iterations = iter;
        out.diag.primal_residual = rp.norm() / (1.0 + std::sqrt(static_cast<double>(k)));
        out.diag.dual_residual =
            (rd.norm() + rdz.norm()) / (1.0 + std::sqrt(static_cast<double>(r)));
        out.diag.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        // Round-off eventually breaks positivity near the boundary; keep the
        // best iterate and stop once progress stalls.
        const double err = std::max({out.diag.primal_residual, out.diag.dual_residual,
                                     out.diag.gap});
        if (err < best_err && mu > 0.0) {
            best_err = err;
            best.diag = out.diag;
            best.v = v;
            best.y.assign(y.data(), y.data() + k);
            stalled = 0;
        } else {
            ++stalled;
        }
        if (err < kTolerance || stalled >= kStallLimit || iter >= kMaxIterations) break;

        Eigen::LLT<CMatrix> zllt(zm);
        if (zllt.info() != Eigen::Success) break;
        const CMatrix zinv = zllt.solve(eye);

        // Schur complement of the HKM direction.
        Eigen::MatrixXd m(k, k);
        std::vector<CMatrix> vg(k);  // V G_j Z^{-1}
        for (Eigen::Index j = 0; j < k; ++j) vg[j] = v * g[j] * zinv;
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j < k; ++j) m(i, j) = re_trace_product(g[i], vg[j]);
            m(i, i) += s(i) / z(i);
        }
        const Eigen::LDLT<Eigen::MatrixXd> mfac(0.5 * (m + m.transpose()));

        auto solve_direction = [&](const CMatrix& rc_v, const RVector& rc_s) {
            const CMatrix base = (rc_v - v * rd) * zinv;
            RVector rhs(k);
            for (Eigen::Index i = 0; i < k; ++i) {
                rhs(i) = rp(i) - re_trace_product(g[i], base) + (rc_s(i) - s(i) * rdz(i)) / z(i);
            }
            Direction d;
            d.dy = mfac.solve(rhs);
            d.dz_mat = rd;
            for (Eigen::Index j = 0; j < k; ++j) d.dz_mat -= d.dy(j) * g[j];
            d.dz = rdz + d.dy;
            const CMatrix t = (rc_v - v * d.dz_mat) * zinv;
            d.dv = 0.5 * (t + t.adjoint());
            d.ds = (rc_s.array() - s.array() * d.dz.array()) / z.array();
            return d;
        };

        auto step_lengths = [&](const Direction& d) {
            const double ap = std::min(max_step(v, d.dv), max_step(s, d.ds));
            const double ad = std::min(max_step(zm, d.dz_mat), max_step(z, d.dz));
            return std::pair{std::min(1.0, kStepFraction * ap), std::min(1.0, kStepFraction * ad)};
        };

        // Predictor (affine scaling).
        const CMatrix rc_v_aff = -v * zm;
        const RVector rc_s_aff = -(s.array() * z.array()).matrix();
        const Direction aff = solve_direction(rc_v_aff, rc_s_aff);
        const auto [ap_aff, ad_aff] = step_lengths(aff);
        const double mu_aff =
            (re_trace_product(v + ap_aff * aff.dv, zm + ad_aff * aff.dz_mat) +
             (s + ap_aff * aff.ds).dot(z + ad_aff * aff.dz)) /
            n_cone;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        // Corrector.
        const CMatrix rc_v = sigma * mu * eye - v * zm - aff.dv * aff.dz_mat;
        const RVector rc_s = (sigma * mu - s.array() * z.array() - aff.ds.array() * aff.dz.array())
                                 .matrix();
        const Direction d = solve_direction(rc_v, rc_s);
        const auto [ap, ad] = step_lengths(d);

        v += ap * d.dv;
        v = 0.5 * (v + v.adjoint()).eval();
        s += ap * d.ds;
        y += ad * d.dy;
        zm += ad * d.dz_mat;
        zm = 0.5 * (zm + zm.adjoint()).eval();
        z += ad * d.dz;
    }

    if (!(best_err < kAcceptable)) {
        throw NumericalFailure("max-min SDP: interior-point method did not converge");
    }
    best.diag.iterations = out.diag.iterations;
    best.diag.reduced_dim = static_cast<int>(r);
    return best;
}

}  // namespace stc::detail
