#include "hamosc/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hamosc/errors.hpp"
#include "hamosc/quadrature.hpp"

namespace hamosc::riccati {

TransformedCoeffs transformed_coeffs(const SystemSpec& spec, double t) {
  TransformedCoeffs tc;
  tc.p = spec.p.eval(t);
  if (!(tc.p > 0.0)) throw NonPositiveP("p(t) must be positive (t=" + std::to_string(t) + ")");
  tc.shift = spec.dp(t) / tc.p - spec.mu.eval(t);
  const Eigen::Index n = spec.n;
  tc.A1 = spec.A.eval(t) + (0.5 * tc.shift) * CMatrix::Identity(n, n);
  tc.B1 = tc.p * spec.B.eval(t);
  tc.C1 = spec.C.eval(t) / tc.p;
  return tc;
}

CMatrix transformed_residual(const TransformedCoeffs& tc, const CMatrix& y, const CMatrix& dy) {
  return dy + y * tc.B1 * y + tc.A1.adjoint() * y + y * tc.A1 - tc.C1;
}

CMatrix original_residual(const SystemSpec& spec, double t, const CMatrix& y, const CMatrix& dy) {
  const double p = spec.p.eval(t);
  const double shift = spec.dp(t) / p - spec.mu.eval(t);
  const CMatrix a = spec.A.eval(t);
  return dy + p * (y * spec.B.eval(t) * y) + a.adjoint() * y + y * a + shift * y -
         spec.C.eval(t) / p;
}

Trajectory reconstruct_solution(const SystemSpec& spec, const MatrixRiccatiResult& yseries,
                                const CMatrix& phi_t1, std::optional<double> t_end,
                                const IntegratorOpts& opts) {
  if (yseries.dense.empty()) throw InterpolationGap("Riccati solution has no steps");
  const double t1 = yseries.dense.t_begin();
  const double t2 = t_end.value_or(yseries.dense.t_end());
  if (t2 > yseries.dense.t_end() || !(t2 > t1)) {
    throw InterpolationGap("reconstruction interval exceeds the Riccati solution");
  }
  if (std::abs(det(phi_t1)) == 0.0) throw std::invalid_argument("Phi(t1) must be invertible");
  const Eigen::Index n = spec.n;
  auto rhs = [&](double t, const CVector& y, CVector& dy) {
    Eigen::Map<const CMatrix> phi(y.data(), n, n);
    const CMatrix Y = yseries.eval(t);
    const CMatrix gen = spec.A.eval(t) + spec.p.eval(t) * spec.B.eval(t) * Y;
    Eigen::Map<CMatrix>(dy.data(), n, n).noalias() = gen * phi;
  };
  DormandPrince<Complex> solver(rhs, opts, t1, pack_matrix(phi_t1));
  Trajectory tr;
  tr.n = n;
  tr.real_valued = false;  // no dense output: sign-change refinement is unavailable
  // Samples sit on the Riccati nodes, where Y is a step-end value rather than an interpolant.
  auto push = [&](double t, const CMatrix& Y, const CMatrix& phi) {
    const CMatrix psi = spec.p.eval(t) * Y * phi;
    tr.times.push_back(t);
    tr.Phi.push_back(phi);
    tr.Psi.push_back(psi);
    tr.sigma_min_ratio.push_back(sigma_ratio(phi, psi));
    tr.conjoined_defect.push_back(conjoined_defect(phi, psi));
    tr.scale.push_back(1.0);
  };
  push(t1, yseries.eval(t1), phi_t1);
  const bool have_nodes = yseries.times.size() == yseries.Y.size() && !yseries.times.empty();
  std::size_t node = 1;
  while (solver.t() < t2) {
    double target = t2;
    const CMatrix* y_node = nullptr;
    if (have_nodes) {
      while (node < yseries.times.size() && yseries.times[node] <= solver.t()) ++node;
      if (node < yseries.times.size() && yseries.times[node] < t2) {
        target = yseries.times[node];
        y_node = &yseries.Y[node];
      }
    }
    while (solver.t() < target) solver.step(target);
    const CMatrix phi = unpack_matrix(solver.y(), n);
    push(solver.t(), y_node ? *y_node : yseries.eval(solver.t()), phi);
  }
  return tr;
}

namespace {

void check_grid(const IntegralRiccatiInstance& inst) {
  if (inst.grid.size() < 2) throw GridMismatch("integral Riccati grid needs two or more points");
  for (std::size_t i = 0; i + 1 < inst.grid.size(); ++i) {
    if (!(inst.grid[i + 1] > inst.grid[i])) throw GridMismatch("grid must be strictly increasing");
  }
}

double central_diff(const ScalarFn& f, double t) { return derivative5(f, t); }

}  // namespace

std::vector<double> integral_riccati_residual(const IntegralRiccatiInstance& inst,
                                              const std::vector<double>& yseries) {
  check_grid(inst);
  if (yseries.size() != inst.grid.size()) throw GridMismatch("series and grid differ in length");
  std::vector<double> integrand(inst.grid.size());
  for (std::size_t i = 0; i < inst.grid.size(); ++i) {
    integrand[i] = inst.a(inst.grid[i]) * yseries[i] * yseries[i];
  }
  const auto running = quad::cumulative_integral_of_samples(std::span<const double>(inst.grid),
                                                            std::span<const double>(integrand));
  std::vector<double> r(inst.grid.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = yseries[i] + running[i] + inst.e(inst.grid[i]);
  }
  return r;
}

IntegralRiccatiSolution solve_integral_riccati(const IntegralRiccatiInstance& inst,
                                               const IntegratorOpts& opts) {
  check_grid(inst);
  using Vec = StateVec<double>;
  auto rhs = [&inst](double t, const Vec& y, Vec& dy) {
    dy(0) = -inst.a(t) * y(0) * y(0) - central_diff(inst.e, t);
  };
  const double t0 = inst.grid.front();
  Vec y0(1);
  y0 << -inst.e(t0);
  DormandPrince<double> solver(rhs, opts, t0, y0);
  DenseSeries<double> dense;
  IntegralRiccatiSolution out;
  const double t_end = inst.grid.back();
  while (solver.t() < t_end) {
    try {
      dense.push(solver.step(t_end));
    } catch (const StepSizeUnderflow&) {
      out.escape.escaped = true;
      out.escape.t_escape = solver.t();
      out.escape.norm_at_escape = std::abs(solver.y()(0));
      break;
    }
    if (!(std::abs(solver.y()(0)) <= kEscapeThreshold)) {
      out.escape.escaped = true;
      out.escape.t_escape = solver.t();
      out.escape.norm_at_escape = std::abs(solver.y()(0));
      break;
    }
  }
  out.escape.t_reached = solver.t();
  out.y.reserve(inst.grid.size());
  for (const double t : inst.grid) {
    if (dense.empty() || t > dense.t_end()) {
      out.y.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.y.push_back(t <= t0 ? y0(0) : dense.eval(t)(0));
    }
  }
  return out;
}

ComparisonReport riccati_comparison_check(const IntegralRiccatiInstance& inst,
                                          const IntegralRiccatiInstance& inst1,
                                          const std::vector<double>& y0series, double tol) {
  check_grid(inst);
  check_grid(inst1);
  if (inst.grid != inst1.grid) throw GridMismatch("instances use different grids");
  if (y0series.size() != inst.grid.size()) throw GridMismatch("series and grid differ in length");
  for (const double t : inst.grid) {
    const double a = inst.a(t);
    const double e = inst.e(t);
    const double e1 = inst1.e(t);
    const auto where = " at t=" + std::to_string(t);
    if (a < 0.0) throw PreconditionViolated("a(t) >= 0 fails" + where);
    if (std::abs(inst1.a(t) - a) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw PreconditionViolated("instances must share the weight a(t)" + where);
    }
    if (!(e > e1)) throw PreconditionViolated("e(t) > e1(t) fails" + where);
    if (!(e1 > 0.0)) throw PreconditionViolated("e1(t) > 0 fails" + where);
  }
  const auto r = integral_riccati_residual(inst, y0series);
  const double scale = std::max(1.0, *std::max_element(y0series.begin(), y0series.end(),
                                                       [](double x, double y) { return std::abs(x) < std::abs(y); }));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(std::abs(r[i]) <= tol * std::abs(scale))) {
      throw PreconditionViolated("y0 does not solve the first equation (residual " +
                                 std::to_string(r[i]) + " at t=" + std::to_string(inst.grid[i]) + ")");
    }
  }

  ComparisonReport rep;
  auto sol = solve_integral_riccati(inst1);
  rep.y1 = std::move(sol.y);
  rep.y1_exists = !sol.escape.escaped;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.y1.size(); ++i) {
    const double gap = rep.y1[i] - y0series[i];
    if (!(gap >= rep.min_gap)) {
      rep.min_gap = gap;
      rep.t_min_gap = inst.grid[i];
    }
  }
  rep.holds = rep.y1_exists && rep.min_gap > -tol;
  return rep;
}

}  // namespace hamosc::riccati
