#pragma once

#include <vector>

#include "stc/beamforming.hpp"

namespace stc::detail {

struct MinTraceResult {
    CMatrix v;              // r x r PSD minimizer
    std::vector<double> y;  // dual multipliers of tr(V G_k) >= 1
    SdpDiagnostics diag;
};

/// Primal-dual interior-point solve of
///     minimize tr(V)  s.t.  tr(V G_k) >= 1 for all k,  V >= 0,
/// whose dual is maximize sum y_k s.t. sum y_k G_k <= I, y >= 0.
/// Every G_k must be Hermitian PSD and nonzero.
MinTraceResult solve_min_trace(const std::vector<CMatrix>& g);

}  // namespace stc::detail
