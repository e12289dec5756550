#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hamosc/coeffs.hpp"
#include "hamosc/integrate.hpp"

namespace hamosc::riccati {

/// Coefficients of Y' + Y B1 Y + A1* Y + Y A1 - C1 = 0 at one time:
///     A1 = A + (1/2)(p'/p - mu) I,   B1 = p B,   C1 = C / p.
struct TransformedCoeffs {
  CMatrix A1;
  CMatrix B1;
  CMatrix C1;
  double p = 1.0;
  double shift = 0.0;  // p'/p - mu
};

/// Throws NonPositiveP when p(t) <= 0, DomainError from evaluation.
TransformedCoeffs transformed_coeffs(const SystemSpec& spec, double t);

/// Residual Y' + Y B1 Y + A1* Y + Y A1 - C1 of the transformed equation for a given (Y, Y').
CMatrix transformed_residual(const TransformedCoeffs& tc, const CMatrix& y, const CMatrix& dy);

/// Residual of Y' + p Y B Y + A* Y + Y (A + (p'/p - mu) I) - C / p written in the original
/// coefficients.
CMatrix original_residual(const SystemSpec& spec, double t, const CMatrix& y, const CMatrix& dy);

/// Rebuilds (Phi, Psi) from a Riccati solution: Phi' = (A + p B Y) Phi, Psi = p Y Phi,
/// starting from Phi(t1) at the first time of `yseries`. Samples are taken at every Riccati node
/// up to t_end, with extra Phi steps in between when needed. The result carries no dense output.
/// Throws InterpolationGap when t_end lies beyond the Riccati solution.
Trajectory reconstruct_solution(const SystemSpec& spec, const MatrixRiccatiResult& yseries,
                                const CMatrix& phi_t1, std::optional<double> t_end = std::nullopt,
                                const IntegratorOpts& opts = {});

using ScalarFn = std::function<double(double)>;

/// y(t) + int_{t0}^t a y^2 + e(t) = 0 sampled on `grid` (grid[0] = t0).
struct IntegralRiccatiInstance {
  ScalarFn a;
  ScalarFn e;
  std::vector<double> grid;
};

/// r(t) = y(t) + int_{t0}^t a y^2 + e(t) on the instance grid. Throws GridMismatch.
std::vector<double> integral_riccati_residual(const IntegralRiccatiInstance& inst,
                                              const std::vector<double>& yseries);

/// Solves the instance through y' + a y^2 + e'(t) = 0, y(t0) = -e(t0), with e' by central
/// differences; samples the solution on the grid.
struct IntegralRiccatiSolution {
  std::vector<double> y;
  EscapeReport escape;
};
IntegralRiccatiSolution solve_integral_riccati(const IntegralRiccatiInstance& inst,
                                               const IntegratorOpts& opts = {});

struct ComparisonReport {
  bool holds = false;  // y1 > y0 - tol on the whole grid
  double min_gap = 0.0;
  double t_min_gap = 0.0;
  bool y1_exists = true;  // no escape before the end of the grid
  std::vector<double> y1;
};

/// Numerical check of the comparison statement for two integral Riccati equations sharing
/// the weight a >= 0 with e > e1 > 0. Throws PreconditionViolated naming the failed inequality.
ComparisonReport riccati_comparison_check(const IntegralRiccatiInstance& inst,
                                          const IntegralRiccatiInstance& inst1,
                                          const std::vector<double>& y0series,
                                          double tol = 1e-6);

}  // namespace hamosc::riccati
