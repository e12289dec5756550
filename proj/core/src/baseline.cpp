#include "hamosc/baseline.hpp"

#include <cmath>
#include <sstream>

#include "hamosc/errors.hpp"
#include "hamosc/quadrature.hpp"

namespace hamosc::criteria::baseline {

int definiteness_sign(const CMatrix& b) {
  const auto s = matlin::eig_hermitian(b);
  const double scale = std::max({1.0, std::abs(s.min()), std::abs(s.max())});
  if (s.min() > tol::sing * scale) return 1;
  if (s.max() < -tol::sing * scale) return -1;
  throw IndefiniteB("B(t) is neither positive nor negative definite");
}

ShiftedCoeffs shifted_coeffs(const SystemSpec& spec, const CMatrix& K, int alpha, double int_mu,
                             double t) {
  const CMatrix A = spec.A.eval(t);
  const CMatrix B = spec.B.eval(t);
  const CMatrix C = spec.C.eval(t);
  const double mu = spec.mu.eval(t);
  const double a = static_cast<double>(alpha);
  ShiftedCoeffs sc;
  sc.A1 = A - B * K;
  sc.B1 = (a * std::exp(int_mu)) * B;
  sc.C1 = (a * std::exp(-int_mu)) * (K * A - K * B * K + C - mu * K + A.adjoint() * K);
  return sc;
}

namespace {

void check_gauge(const CMatrix& K, Eigen::Index n) {
  if (K.rows() != n || K.cols() != n) throw PreconditionViolated("K must be n x n");
  if (K.imag().cwiseAbs().maxCoeff() != 0.0) throw PreconditionViolated("K must be real");
  if (!matlin::is_hermitian(K)) throw PreconditionViolated("K must be symmetric");
  if (K.norm() == 0.0) throw PreconditionViolated("K must be nonzero");
}

DivergenceOpts resolved(const DivergenceOpts& d, double t0) {
  DivergenceOpts out = d;
  if (!(out.t_max > t0)) out.t_max = t0 + 200.0;
  return out;
}

}  // namespace

CriterionReport baseline_verdict(const SystemSpec& spec, const CMatrix& K,
                                 const matlin::FunctionalSpec& g, const CriteriaOpts& opts) {
  const auto d = resolved(opts.divergence, spec.t0);
  CriterionReport rep;
  rep.theorem = Theorem::Baseline;
  if (!spec.is_real()) {
    rep.reason = "requires real coefficient matrices";
    return rep;
  }
  try {
    check_gauge(K, spec.n);
    if (g.dim() != spec.n) throw PreconditionViolated("functional weight must be n x n");
    const int alpha = definiteness_sign(spec.B.eval(spec.t0));
    rep.conditions.push_back({"B(t0) definite", true, alpha > 0 ? "alpha = +1" : "alpha = -1"});

    const auto grid = checkpoint_grid(spec.t0, d, opts.max_h);
    const auto fine = quad::with_midpoints(grid.t);
    const auto int_mu = quad::cumulative_simpson(std::span<const double>(fine),
                                                 [&spec](double t) { return spec.mu.eval(t); });
    std::vector<double> f1(fine.size()), f2(fine.size()), bnd(fine.size());
    for (std::size_t k = 0; k < fine.size(); ++k) {
      const double t = fine[k];
      const CMatrix B = spec.B.eval(t);
      int sign = 0;
      try {
        sign = definiteness_sign(B);
      } catch (const IndefiniteB&) {
      }
      if (sign != alpha) {
        std::ostringstream os;
        os << "B(t) changes definiteness at t=" << t;
        throw IndefiniteB(os.str());
      }
      const auto sc = shifted_coeffs(spec, K, alpha, int_mu[k], t);
      const CMatrix B1inv = matlin::inverse_hpd(sc.B1);
      const double gBinv = matlin::functional_general(g, B.inverse()).real();
      f1[k] = alpha * std::exp(int_mu[k]) / gBinv;
      f2[k] = matlin::functional_general(g, sc.C1 + sc.A1.adjoint() * B1inv * sc.A1).real();
      bnd[k] = matlin::functional_general(g, B1inv * sc.A1).real();
      if (!std::isfinite(f1[k] + f2[k] + bnd[k])) throw DomainError("integrand is not finite", t);
    }
    rep.conditions.push_back({"B(t) definite with constant sign", true, "all probe points"});
    const auto I1 = quad::cumulative_simpson_interleaved(grid.t, f1);
    const auto I2 = quad::cumulative_simpson_interleaved(grid.t, f2);
    std::vector<double> second(grid.t.size());
    for (std::size_t i = 0; i < second.size(); ++i) second[i] = -I2[i] - bnd[2 * i];
    rep.applicable = true;
    rep.reason = "real system with definite B(t)";
    rep.estimates.push_back(classify_on_grid("int alpha e^{int mu} / g[B^-1]", grid, I1, d));
    rep.estimates.push_back(
        classify_on_grid("g[-int (C1 + A1* B1^-1 A1) - B1^-1 A1]", grid, second, d));
  } catch (const Error& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  } catch (const std::invalid_argument& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  }
  bool all = rep.applicable && !rep.estimates.empty();
  for (const auto& e : rep.estimates) all = all && e.verdict == DivergenceVerdict::Diverges;
  rep.verdict = all ? Verdict::OscillatoryEvidence : Verdict::Inconclusive;
  return rep;
}

CriterionReport baseline_verdict(const SystemSpec& spec, const CriteriaOpts& opts) {
  const Eigen::Index n = spec.n;
  const CMatrix K = opts.K.value_or(kDefaultGauge * CMatrix::Identity(n, n));
  try {
    const auto g = opts.g_weight ? matlin::FunctionalSpec::normalized(*opts.g_weight)
                                 : matlin::FunctionalSpec::normalized_trace(n);
    return baseline_verdict(spec, K, g, opts);
  } catch (const std::exception& e) {
    CriterionReport rep;
    rep.theorem = Theorem::Baseline;
    rep.reason = std::string("invalid functional weight: ") + e.what();
    return rep;
  }
}

}  // namespace hamosc::criteria::baseline
