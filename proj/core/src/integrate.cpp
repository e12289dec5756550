#include "hamosc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hamosc/errors.hpp"

namespace hamosc {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kCollapseFraction = 1e-6;  // step collapse: h below this fraction of the horizon

double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol,
                       double& fmin) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  fmin = std::min({f(x), fc, fd});
  if (fc < fmin) return c;
  return x;
}

double bisect_sign(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Shared stepping loop with escape classification for the Riccati integrations.
template <class Scalar, class OnStep>
EscapeReport run_with_escape(DormandPrince<Scalar>& solver, double t_begin, double t_end,
                             OnStep&& on_step) {
  EscapeReport rep;
  const double collapse = kCollapseFraction * std::max(1.0, t_end - t_begin);
  while (solver.t() < t_end) {
    try {
      const auto& seg = solver.step(t_end);
      on_step(seg, solver);
    } catch (const StepSizeUnderflow&) {
      const double norm = solver.y().norm();
      if (norm > 1e6) {
        rep.escaped = true;
        rep.t_escape = solver.t();
        rep.norm_at_escape = norm;
        break;
      }
      throw;
    }
    const double norm = solver.y().norm();
    if (!(norm <= kEscapeThreshold)) {
      rep.norm_at_escape = norm;
      if (solver.last_h() < collapse) {
        rep.escaped = true;
        rep.t_escape = solver.t();
      } else {
        rep.large = true;
      }
      break;
    }
  }
  rep.t_reached = solver.t();
  return rep;
}

}  // namespace

CVector pack_state(const CMatrix& phi, const CMatrix& psi) {
  const Eigen::Index nn = phi.size();
  CVector y(2 * nn);
  y.head(nn) = Eigen::Map<const CVector>(phi.data(), nn);
  y.tail(nn) = Eigen::Map<const CVector>(psi.data(), nn);
  return y;
}

std::pair<CMatrix, CMatrix> unpack_state(const CVector& y, Eigen::Index n) {
  const Eigen::Index nn = n * n;
  return {Eigen::Map<const CMatrix>(y.data(), n, n), Eigen::Map<const CMatrix>(y.data() + nn, n, n)};
}

CVector pack_matrix(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unpack_matrix(const CVector& y, Eigen::Index n) {
  return Eigen::Map<const CMatrix>(y.data(), n, n);
}

double sigma_ratio(const CMatrix& phi, const CMatrix& psi) {
  CMatrix stacked(phi.rows() + psi.rows(), phi.cols());
  stacked << phi, psi;
  const auto top = matlin::singular_values(stacked);
  if (top.empty() || top.front() == 0.0) return 0.0;
  const auto sv = matlin::singular_values(phi);
  return sv.back() / top.front();
}

double conjoined_defect(const CMatrix& phi, const CMatrix& psi) {
  return (phi.adjoint() * psi - psi.adjoint() * phi).norm();
}

Complex det(const CMatrix& m) { return m.partialPivLu().determinant(); }

double log_abs_det(const CMatrix& m) {
  double acc = 0.0;
  for (const double s : matlin::singular_values(m)) acc += std::log(s);
  return acc;
}

std::pair<CMatrix, CMatrix> Trajectory::state_at(double t) const { return unpack_state(dense.eval(t), n); }

DormandPrince<Complex>::Rhs system_rhs(const SystemSpec& spec) {
  const Eigen::Index n = spec.n;
  return [&spec, n](double t, const CVector& y, CVector& dy) {
    const Eigen::Index nn = n * n;
    Eigen::Map<const CMatrix> phi(y.data(), n, n);
    Eigen::Map<const CMatrix> psi(y.data() + nn, n, n);
    const CMatrix a = spec.A.eval(t);
    const CMatrix b = spec.B.eval(t);
    const CMatrix c = spec.C.eval(t);
    const double mu = spec.mu.eval(t);
    Eigen::Map<CMatrix> dphi(dy.data(), n, n);
    Eigen::Map<CMatrix> dpsi(dy.data() + nn, n, n);
    dphi.noalias() = a * phi + b * psi;
    dpsi.noalias() = c * phi - a.adjoint() * psi;
    dpsi += mu * psi;
  };
}

namespace {

void record(Trajectory& tr, double t, const CMatrix& phi, const CMatrix& psi, double scale) {
  tr.times.push_back(t);
  tr.Phi.push_back(phi);
  tr.Psi.push_back(psi);
  tr.sigma_min_ratio.push_back(sigma_ratio(phi, psi));
  tr.conjoined_defect.push_back(conjoined_defect(phi, psi));
  tr.scale.push_back(scale);
}

}  // namespace

Trajectory integrate_system(const SystemSpec& spec, const CMatrix& phi0, const CMatrix& psi0,
                            double t_end, const SystemIntegratorOpts& opts) {
  if (phi0.rows() != spec.n || phi0.cols() != spec.n || psi0.rows() != spec.n ||
      psi0.cols() != spec.n) {
    throw std::invalid_argument("initial data has the wrong dimension");
  }
  if (!(t_end > spec.t0)) throw std::invalid_argument("integration end must exceed t0");
  if (!(opts.rescale_threshold > 0.0)) throw std::invalid_argument("rescale threshold must be positive");

  Trajectory tr;
  tr.n = spec.n;
  tr.real_valued = spec.is_real() && phi0.imag().isZero(0.0) && psi0.imag().isZero(0.0);
  DormandPrince<Complex> solver(system_rhs(spec), opts, spec.t0, pack_state(phi0, psi0));
  double scale = 1.0;
  record(tr, spec.t0, phi0, psi0, scale);
  while (solver.t() < t_end) {
    tr.dense.push(solver.step(t_end));
    auto [phi, psi] = unpack_state(solver.y(), spec.n);
    const double norm = phi.norm() + psi.norm();
    if (norm > opts.rescale_threshold) {
      const double factor = std::ldexp(1.0, -std::ilogb(norm));
      solver.rescale(factor);
      scale *= factor;
      tr.rescale_log.push_back({solver.t(), factor});
      phi *= factor;
      psi *= factor;
    }
    record(tr, solver.t(), phi, psi, scale);
  }
  return tr;
}

ZeroScan scan_det_zeros(const Trajectory& traj, double zeta) {
  if (traj.times.empty()) throw std::invalid_argument("empty trajectory");
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("zeta must lie in (0, 1)");
  ZeroScan scan;
  const auto ratio_at = [&](double t) {
    const auto [phi, psi] = traj.state_at(t);
    return sigma_ratio(phi, psi);
  };
  const double t_tol = 1e-12;

  if (traj.real_valued && !traj.dense.empty()) {
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      // Both ends evaluated on segment k so the common scale cancels.
      const auto& seg = traj.dense.segments()[k];
      const double d0 = det(unpack_state(seg.eval(seg.t0), traj.n).first).real();
      const double d1 = det(unpack_state(seg.eval(seg.t1()), traj.n).first).real();
      if (d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) == (d1 > 0.0)) continue;
      const auto seg_det = [&](double t) { return det(unpack_state(seg.eval(t), traj.n).first).real(); };
      const double tz = bisect_sign(seg_det, seg.t0, seg.t1(), t_tol * std::max(1.0, std::abs(seg.t0)));
      scan.zeros.push_back({tz, ratio_at(tz), ZeroRecord::Kind::SignChange});
    }
  }

  const auto& r = traj.sigma_min_ratio;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (!(r[i] < r[i - 1] && r[i] <= r[i + 1])) continue;
    const double a = traj.times[i - 1];
    const double b = traj.times[i + 1];
    // Without dense output (reconstructed trajectories) the sampled minimum is reported.
    double fmin = r[i];
    const double tm = traj.dense.empty()
                          ? traj.times[i]
                          : golden_minimize(ratio_at, a, b, t_tol * std::max(1.0, std::abs(b)), fmin);
    const bool duplicate = std::any_of(scan.zeros.begin(), scan.zeros.end(), [&](const ZeroRecord& z) {
      return std::abs(z.t_zero - tm) <= 1e-6 * std::max(1.0, std::abs(tm));
    });
    if (duplicate) continue;
    if (fmin <= zeta) {
      scan.zeros.push_back({tm, fmin, ZeroRecord::Kind::Dip});
    } else if (fmin <= 1e3 * zeta) {
      scan.near_misses.push_back({tm, fmin});
    }
  }
  std::sort(scan.zeros.begin(), scan.zeros.end(),
            [](const ZeroRecord& x, const ZeroRecord& y) { return x.t_zero < y.t_zero; });
  // Adjacent local minima can refine onto the same dip.
  scan.zeros.erase(std::unique(scan.zeros.begin(), scan.zeros.end(),
                               [](const ZeroRecord& x, const ZeroRecord& y) {
                                 return std::abs(x.t_zero - y.t_zero) <=
                                        1e-6 * std::max(1.0, std::abs(y.t_zero));
                               }),
                   scan.zeros.end());
  return scan;
}

std::vector<ZeroRecord> detect_det_zeros(const Trajectory& traj, double zeta) {
  return scan_det_zeros(traj, zeta).zeros;
}

ScalarTrajectory integrate_scalar_system(const ScalarSystemSpec& s, double phi0, double psi0,
                                         double t_end, const IntegratorOpts& opts) {
  if (!(t_end > s.t0)) throw std::invalid_argument("integration end must exceed t0");
  using Vec = StateVec<double>;
  auto rhs = [&s](double t, const Vec& y, Vec& dy) {
    dy(0) = s.a11.eval(t) * y(0) + s.a12.eval(t) * y(1);
    dy(1) = s.a21.eval(t) * y(0) + s.a22.eval(t) * y(1);
  };
  Vec y0(2);
  y0 << phi0, psi0;
  DormandPrince<double> solver(rhs, opts, s.t0, y0);
  ScalarTrajectory out;
  out.times.push_back(s.t0);
  out.phi.push_back(phi0);
  out.psi.push_back(psi0);
  while (solver.t() < t_end) {
    const auto& seg = solver.step(t_end);
    out.dense.push(seg);
    const double prev = out.phi.back();
    const double cur = solver.y()(0);
    if (prev != 0.0 && cur != 0.0 && (prev > 0.0) != (cur > 0.0)) {
      const auto phi_at = [&seg](double t) { return seg.eval(t)(0); };
      out.zeros.push_back(bisect_sign(phi_at, seg.t0, seg.t1(), 1e-12 * std::max(1.0, std::abs(seg.t0))));
    }
    out.times.push_back(solver.t());
    out.phi.push_back(cur);
    out.psi.push_back(solver.y()(1));
  }
  return out;
}

ScalarRiccatiResult integrate_scalar_riccati(const ScalarSystemSpec& s, double y0, double t_end,
                                             const IntegratorOpts& opts) {
  if (!(t_end > s.t0)) throw std::invalid_argument("integration end must exceed t0");
  using Vec = StateVec<double>;
  auto rhs = [&s](double t, const Vec& y, Vec& dy) {
    const double v = y(0);
    dy(0) = -s.a12.eval(t) * v * v - s.E(t) * v + s.a21.eval(t);
  };
  Vec init(1);
  init << y0;
  DormandPrince<double> solver(rhs, opts, s.t0, init);
  ScalarRiccatiResult out;
  out.times.push_back(s.t0);
  out.y.push_back(y0);
  out.escape = run_with_escape(solver, s.t0, t_end, [&](const DenseSegment<double>& seg, const auto& sv) {
    out.dense.push(seg);
    out.times.push_back(sv.t());
    out.y.push_back(sv.y()(0));
  });
  return out;
}

DormandPrince<Complex>::Rhs matrix_riccati_rhs(const SystemSpec& spec) {
  const Eigen::Index n = spec.n;
  return [&spec, n](double t, const CVector& y, CVector& dy) {
    Eigen::Map<const CMatrix> Y(y.data(), n, n);
    const CMatrix a = spec.A.eval(t);
    const CMatrix b = spec.B.eval(t);
    const CMatrix c = spec.C.eval(t);
    const double p = spec.p.eval(t);
    if (!(p > 0.0)) throw NonPositiveP("p(t) must be positive (t=" + std::to_string(t) + ")");
    const double shift = spec.dp(t) / p - spec.mu.eval(t);
    Eigen::Map<CMatrix> dY(dy.data(), n, n);
    dY.noalias() = -(p * (Y * b * Y) + a.adjoint() * Y + Y * a);
    dY += -shift * Y + c / p;
  };
}

MatrixRiccatiResult integrate_matrix_riccati(const SystemSpec& spec, const CMatrix& y0,
                                             double t_end, const IntegratorOpts& opts) {
  if (y0.rows() != spec.n || y0.cols() != spec.n) throw std::invalid_argument("Y0 has the wrong dimension");
  if (!(t_end > spec.t0)) throw std::invalid_argument("integration end must exceed t0");
  const bool hermitian = matlin::is_hermitian(y0);
  DormandPrince<Complex> solver(matrix_riccati_rhs(spec), opts, spec.t0, pack_matrix(y0));
  MatrixRiccatiResult out;
  out.n = spec.n;
  out.times.push_back(spec.t0);
  out.Y.push_back(y0);
  if (hermitian) out.hermitian_drift.push_back(matlin::hermitian_defect(y0));
  out.escape = run_with_escape(solver, spec.t0, t_end, [&](const DenseSegment<Complex>& seg, const auto& sv) {
    out.dense.push(seg);
    out.times.push_back(sv.t());
    CMatrix Y = unpack_matrix(sv.y(), spec.n);
    if (hermitian) out.hermitian_drift.push_back(matlin::hermitian_defect(Y));
    out.Y.push_back(std::move(Y));
  });
  return out;
}

}  // namespace hamosc
