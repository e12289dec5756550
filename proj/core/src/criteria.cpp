#include "hamosc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamosc/baseline.hpp"
#include "hamosc/errors.hpp"
#include "hamosc/quadrature.hpp"
#include "hamosc/riccati.hpp"

namespace hamosc::criteria {

const char* theorem_id(Theorem t) {
  switch (t) {
    case Theorem::Baseline: return "T1.1";
    case Theorem::Scalar: return "T2.1";
    case Theorem::TraceIntegral: return "T3.1";
    case Theorem::EigenBound: return "T3.2";
    case Theorem::Factored: return "T3.3";
  }
  return "?";
}

std::optional<Theorem> parse_theorem(std::string_view id) {
  if (!id.empty() && (id.front() == 'T' || id.front() == 't')) id.remove_prefix(1);
  if (id == "1.1") return Theorem::Baseline;
  if (id == "2.1") return Theorem::Scalar;
  if (id == "3.1") return Theorem::TraceIntegral;
  if (id == "3.2") return Theorem::EigenBound;
  if (id == "3.3") return Theorem::Factored;
  return std::nullopt;
}

const char* to_string(Verdict v) {
  return v == Verdict::OscillatoryEvidence ? "oscillatory-evidence" : "inconclusive";
}

std::string CriterionReport::status() const {
  return applicable ? to_string(verdict) : "not-applicable";
}

std::vector<double> SummandSeries::total() const {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = boundary[i] + quadratic[i] + potential[i] + skew[i];
  }
  return out;
}

bool positive_definite(const CMatrix& b) {
  const auto s = matlin::eig_hermitian(b);
  return s.min() > tol::sing * std::max(1.0, s.max());
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Pointwise pieces of a J-type series sampled on nodes and midpoints.
struct Samples {
  std::vector<double> boundary, quadratic, potential, skew;
  explicit Samples(std::size_t n) : boundary(n), quadratic(n), potential(n), skew(n) {}
};

SummandSeries assemble(std::span<const double> grid, const Samples& s, double scale = 1.0) {
  SummandSeries out;
  out.t.assign(grid.begin(), grid.end());
  const auto quad = quad::cumulative_simpson_interleaved(grid, s.quadratic);
  const auto pot = quad::cumulative_simpson_interleaved(grid, s.potential);
  const auto skew = quad::cumulative_simpson_interleaved(grid, s.skew);
  const std::size_t n = grid.size();
  out.boundary.resize(n);
  out.quadratic.resize(n);
  out.potential.resize(n);
  out.skew.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.boundary[i] = scale * s.boundary[2 * i];
    out.quadratic[i] = -scale * quad[i];
    out.potential[i] = -scale * pot[i];
    out.skew[i] = scale * skew[i];
  }
  return out;
}

struct PositiveParts {
  riccati::TransformedCoeffs tc;
  CMatrix B1inv;
  double lambda1 = 0.0;
};

PositiveParts positive_parts(const SystemSpec& spec, double t) {
  PositiveParts pp{riccati::transformed_coeffs(spec, t), {}, 0.0};
  const auto s = matlin::eig_hermitian(pp.tc.B1);
  if (!(s.min() > tol::sing * std::max(1.0, s.max()))) throw SingularB(t);
  pp.lambda1 = s.min();
  pp.B1inv = matlin::inverse_hpd(pp.tc.B1);
  return pp;
}

void check_finite(double v, double t, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite", t);
}

}  // namespace

SummandSeries eval_J(const SystemSpec& spec, std::span<const double> grid) {
  const auto fine = quad::with_midpoints(grid);
  Samples s(fine.size());
  const double n = static_cast<double>(spec.n);
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double t = fine[k];
    const auto pp = positive_parts(spec, t);
    const CMatrix& A1 = pp.tc.A1;
    const CMatrix H = matlin::hermitian_part(A1);
    const CMatrix K = matlin::skew_part(A1);
    s.boundary[k] = -matlin::trace(H * pp.B1inv).real();
    const CMatrix quad = 0.5 * (A1 * pp.B1inv * A1.adjoint() + A1.adjoint() * pp.B1inv * A1);
    s.quadratic[k] = matlin::trace(quad).real();
    s.potential[k] = matlin::trace(pp.tc.C1).real();
    const double sk = matlin::trace(K * pp.B1inv).real();
    s.skew[k] = pp.lambda1 / n * sk * sk;
    check_finite(s.quadratic[k] + s.potential[k] + s.skew[k] + s.boundary[k], t, "J integrand");
  }
  return assemble(grid, s);
}

SummandSeries eval_hermitian_limit(const SystemSpec& spec, std::span<const double> grid) {
  const auto fine = quad::with_midpoints(grid);
  Samples s(fine.size());
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double t = fine[k];
    const auto pp = positive_parts(spec, t);
    const CMatrix H = matlin::hermitian_part(pp.tc.A1);
    s.boundary[k] = -matlin::trace(H * pp.B1inv).real();
    s.quadratic[k] = matlin::trace(H * pp.B1inv * H).real();
    s.potential[k] = matlin::trace(pp.tc.C1).real();
    check_finite(s.boundary[k] + s.quadratic[k] + s.potential[k], t, "limit integrand");
  }
  return assemble(grid, s, 4.0);
}

namespace {

CMatrix sqrt_b1(const SystemSpec& spec, double t) {
  const double p = spec.p.eval(t);
  if (!(p > 0.0)) throw NonPositiveP("p(t) must be positive (t=" + std::to_string(t) + ")");
  return matlin::sqrt_psd(p * spec.B.eval(t));
}

double opnorm(const CMatrix& m) {
  const auto sv = matlin::singular_values(m);
  return sv.empty() ? 0.0 : *std::max_element(sv.begin(), sv.end());
}

// Pseudo-inverse dropping singular values at or below `cutoff` (absolute).
CMatrix pinv_abs(const CMatrix& m, double cutoff) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  CMatrix sinv = CMatrix::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) sinv(i, i) = 1.0 / sv(i);
  }
  return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

Eigen::Index rank_abs(const CMatrix& m, double cutoff) {
  const auto sv = matlin::singular_values(m);
  return static_cast<Eigen::Index>(
      std::count_if(sv.begin(), sv.end(), [cutoff](double s) { return s > cutoff; }));
}

}  // namespace

FSolution solve_F(const SystemSpec& spec, double t) {
  const auto tc = riccati::transformed_coeffs(spec, t);
  FSolution sol;
  sol.sqrtB1 = matlin::sqrt_psd(tc.B1);
  const CMatrix dS = derivative5([&spec](double s) -> CMatrix { return sqrt_b1(spec, s); }, t);
  sol.M = tc.A1 * sol.sqrtB1 - dS;
  const CMatrix& S = sol.sqrtB1;
  const double mnorm = sol.M.norm();

  if (positive_definite(tc.B1)) {
    sol.invertible = true;
    sol.F = matlin::inverse_hpd(S);
  } else {
    const double scale = std::max({1.0, opnorm(S), opnorm(tc.A1) * opnorm(S)});
    const double cutoff = tol::rank * scale;
    CMatrix aug(S.rows(), S.cols() + sol.M.cols());
    aug << S, sol.M;
    const auto rs = rank_abs(S, cutoff);
    const auto ra = rank_abs(aug, cutoff);
    if (rs != ra) {
      throw NoSolution("rank condition fails at t=" + std::to_string(t) + " (rank " +
                       std::to_string(rs) + " vs " + std::to_string(ra) + ")");
    }
    sol.F = pinv_abs(S, cutoff) * sol.M * pinv_abs(sol.M, cutoff);
  }
  sol.residual = (S * sol.F * sol.M - sol.M).norm();
  if (!(sol.residual <= 1e-9 * std::max(1.0, mnorm))) {
    throw NoSolution("solution residual " + fmt(sol.residual) + " too large at t=" +
                     std::to_string(t));
  }
  return sol;
}

SummandSeries eval_J2(const SystemSpec& spec, const FProvider& provider,
                      std::span<const double> grid) {
  const auto fine = quad::with_midpoints(grid);
  Samples s(fine.size());
  const double n = static_cast<double>(spec.n);
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double t = fine[k];
    const auto sol = provider(t);
    const CMatrix AF = sol.F * sol.M;
    const Complex tr = matlin::trace(AF);
    s.boundary[k] = -tr.real();
    s.quadratic[k] = matlin::trace(AF * AF.adjoint()).real();
    s.potential[k] = matlin::trace(spec.B.eval(t) * spec.C.eval(t)).real();
    s.skew[k] = tr.imag() * tr.imag() / n;
    check_finite(s.boundary[k] + s.quadratic[k] + s.potential[k] + s.skew[k], t, "J2 integrand");
  }
  return assemble(grid, s);
}

SummandSeries eval_J2(const SystemSpec& spec, std::span<const double> grid) {
  return eval_J2(spec, [&spec](double t) { return solve_F(spec, t); }, grid);
}

namespace {

DivergenceOpts resolved(const DivergenceOpts& d, double t0) {
  DivergenceOpts out = d;
  if (!(out.t_max > t0)) out.t_max = t0 + 200.0;
  return out;
}

// Running integral of f over the checkpoint grid (Simpson with midpoints).
std::vector<double> running(const CheckpointGrid& g, const std::function<double(double)>& f) {
  return quad::cumulative_simpson(std::span<const double>(g.t), f);
}

void finish(CriterionReport& rep) {
  bool all = rep.applicable && !rep.estimates.empty();
  for (const auto& e : rep.estimates) all = all && e.verdict == DivergenceVerdict::Diverges;
  rep.verdict = all ? Verdict::OscillatoryEvidence : Verdict::Inconclusive;
}

CriterionReport not_applicable(Theorem th, std::string reason) {
  CriterionReport rep;
  rep.theorem = th;
  rep.applicable = false;
  rep.reason = std::move(reason);
  return rep;
}

}  // namespace

CriterionReport trace_integral_verdict(const SystemSpec& spec, const CriteriaOpts& opts) {
  const auto d = resolved(opts.divergence, spec.t0);
  CriterionReport rep;
  rep.theorem = Theorem::TraceIntegral;
  try {
    const auto g = checkpoint_grid(spec.t0, d, opts.max_h);
    SummandSeries J;
    try {
      J = eval_J(spec, g.t);
    } catch (const SingularB& e) {
      rep.conditions.push_back({"B(t) > 0", false, e.what()});
      rep.reason = "B(t) is not positive definite on the probe grid";
      return rep;
    }
    rep.conditions.push_back({"B(t) > 0", true, "all probe points"});
    // tr(A B^-1 A*) finite everywhere: the quadratic part of J already evaluated it.
    rep.conditions.push_back({"tr(A B^-1 A*) locally integrable", true, "finite quadrature"});
    const auto lam = running(g, [&](double t) {
      return spec.p.eval(t) * matlin::eig_hermitian(spec.B.eval(t)).min();
    });
    rep.applicable = true;
    rep.reason = "B(t) > 0 on the probe grid";
    rep.estimates.push_back(classify_on_grid("int p lambda_1(B)", g, lam, d));
    rep.estimates.push_back(classify_on_grid("J", g, J.total(), d));
  } catch (const Error& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  }
  finish(rep);
  return rep;
}

CriterionReport eigen_bound_verdict(const SystemSpec& spec, const CriteriaOpts& opts) {
  const auto d = resolved(opts.divergence, spec.t0);
  CriterionReport rep;
  rep.theorem = Theorem::EigenBound;
  try {
    const auto g = checkpoint_grid(spec.t0, d, opts.max_h);
    SummandSeries L;
    try {
      L = eval_hermitian_limit(spec, g.t);
    } catch (const SingularB& e) {
      rep.conditions.push_back({"B(t) > 0", false, e.what()});
      rep.reason = "B(t) is not positive definite on the probe grid";
      return rep;
    }
    rep.conditions.push_back({"B(t) > 0", true, "all probe points"});
    rep.conditions.push_back({"limit integrand locally integrable", true, "finite quadrature"});
    const auto v = running(g, [&](double t) { return spec.p.eval(t) * matlin::nu_0(spec.B.eval(t)); });
    rep.applicable = true;
    rep.reason = "B(t) > 0 on the probe grid";
    rep.estimates.push_back(classify_on_grid("int p / tr(B^-1)", g, v, d));
    rep.estimates.push_back(classify_on_grid("Hermitian-part limit", g, L.total(), d));
  } catch (const Error& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  }
  finish(rep);
  return rep;
}

CriterionReport factored_verdict(const SystemSpec& spec, const CriteriaOpts& opts) {
  const auto d = resolved(opts.divergence, spec.t0);
  CriterionReport rep;
  rep.theorem = Theorem::Factored;
  try {
    const auto g = checkpoint_grid(spec.t0, d, opts.max_h);
    double worst = 0.0;
    bool all_invertible = true;
    auto provider = [&](double t) {
      auto sol = solve_F(spec, t);
      worst = std::max(worst, sol.residual);
      all_invertible = all_invertible && sol.invertible;
      return sol;
    };
    SummandSeries J2;
    try {
      J2 = eval_J2(spec, provider, g.t);
    } catch (const NoSolution& e) {
      rep.conditions.push_back({"S X M = M solvable", false, e.what()});
      rep.reason = "no solution F on the probe grid";
      return rep;
    }
    rep.conditions.push_back({"S X M = M solvable", true,
                              std::string(all_invertible ? "B1 > 0, F = S^-1" : "rank condition") +
                                  ", max residual " + fmt(worst)});
    rep.applicable = true;
    rep.reason = "F solves S X M = M at every probe point";
    rep.estimates.push_back(classify_on_grid("J2", g, J2.total(), d));
  } catch (const Error& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  }
  finish(rep);
  return rep;
}

CriterionReport scalar_verdict(const ScalarSystemSpec& s, const CriteriaOpts& opts) {
  const auto d = resolved(opts.divergence, s.t0);
  CriterionReport rep;
  rep.theorem = Theorem::Scalar;
  try {
    const auto g = checkpoint_grid(s.t0, d, opts.max_h);
    const auto fine = quad::with_midpoints(g.t);
    // int E on the interleaved grid, so every Simpson sample has its own exponent.
    const auto mE = quad::cumulative_simpson(std::span<const double>(fine),
                                             [&s](double t) { return s.E(t); });
    std::vector<double> f1(fine.size()), f2(fine.size());
    double min_a12 = std::numeric_limits<double>::infinity();
    double t_min = s.t0;
    for (std::size_t k = 0; k < fine.size(); ++k) {
      const double t = fine[k];
      const double a12 = s.a12.eval(t);
      if (a12 < min_a12) {
        min_a12 = a12;
        t_min = t;
      }
      f1[k] = a12 * std::exp(-mE[k]);
      f2[k] = -s.a21.eval(t) * std::exp(mE[k]);
      check_finite(f1[k] + f2[k], t, "scalar integrand");
    }
    const bool sign_ok = min_a12 >= -tol::ineq;
    rep.conditions.push_back({"a12(t) >= 0", sign_ok,
                              "min " + fmt(min_a12) + " at t=" + fmt(t_min)});
    if (!sign_ok) {
      rep.reason = "a12(t) takes negative values";
      finish(rep);
      return rep;
    }
    rep.applicable = true;
    rep.reason = "a12(t) >= 0 on the probe grid";
    rep.estimates.push_back(classify_on_grid(
        "int a12 exp(-int E)", g, quad::cumulative_simpson_interleaved(g.t, f1), d));
    rep.estimates.push_back(classify_on_grid(
        "-int a21 exp(int E)", g, quad::cumulative_simpson_interleaved(g.t, f2), d));
  } catch (const Error& e) {
    rep.applicable = false;
    rep.reason = e.what();
    rep.estimates.clear();
  }
  finish(rep);
  return rep;
}

CriterionReport scalar_verdict(const SystemSpec& spec, const CriteriaOpts& opts) {
  const auto s = as_scalar_system(spec);
  if (!s) return not_applicable(Theorem::Scalar, "requires a real system with n = 1");
  return scalar_verdict(*s, opts);
}

CriterionReport evaluate(Theorem which, const SystemSpec& spec, const CriteriaOpts& opts) {
  switch (which) {
    case Theorem::Baseline: return baseline::baseline_verdict(spec, opts);
    case Theorem::Scalar: return scalar_verdict(spec, opts);
    case Theorem::TraceIntegral: return trace_integral_verdict(spec, opts);
    case Theorem::EigenBound: return eigen_bound_verdict(spec, opts);
    case Theorem::Factored: return factored_verdict(spec, opts);
  }
  return not_applicable(which, "unknown criterion");
}

}  // namespace hamosc::criteria
