#pragma once

#include "hamosc/criteria.hpp"

namespace hamosc::criteria::baseline {

/// Coefficients of the shifted system
///     A1 = A - B K,  B1 = alpha e^{m} B,  C1 = alpha e^{-m} (K A - K B K + C - mu K + A* K),
/// m = int_{t0}^t mu. Deliberately a different type from riccati::TransformedCoeffs.
struct ShiftedCoeffs {
  CMatrix A1;
  CMatrix B1;
  CMatrix C1;
};

/// +1 if B(t) > 0, -1 if B(t) < 0; throws IndefiniteB otherwise.
int definiteness_sign(const CMatrix& b);

ShiftedCoeffs shifted_coeffs(const SystemSpec& spec, const CMatrix& K, int alpha, double int_mu,
                             double t);

inline constexpr double kDefaultGauge = 1e-3;

/// Evaluates int alpha e^{m} / g[B^-1] and Re g[-int (C1 + A1* B1^-1 A1) - B1^-1 A1] as
/// divergence estimates; requires a real spec, definite B of constant sign and a nonzero
/// symmetric K.
CriterionReport baseline_verdict(const SystemSpec& spec, const CMatrix& K,
                                 const matlin::FunctionalSpec& g, const CriteriaOpts& opts = {});
/// Uses opts.K / opts.g_weight or the defaults 1e-3 I and I / n.
CriterionReport baseline_verdict(const SystemSpec& spec, const CriteriaOpts& opts = {});

}  // namespace hamosc::criteria::baseline
