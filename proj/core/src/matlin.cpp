#include "hamosc/matlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hamosc/errors.hpp"

namespace hamosc::matlin {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_hermitian(const CMatrix& m, const char* what) {
  if (!is_hermitian(m)) {
    throw NotHermitian(std::string(what) + " is not Hermitian (defect " +
                       std::to_string(hermitian_defect(m)) + ")");
  }
}

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_solver(const CMatrix& h, bool vectors) {
  const CMatrix sym = hermitian_part(h);
  return Eigen::SelfAdjointEigenSolver<CMatrix>(
      sym, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

void require_psd(const Eigen::VectorXd& evals, const char* what) {
  const double lo = evals.minCoeff();
  const double hi = evals.maxCoeff();
  if (lo < -tol::psd * std::max(1.0, hi)) {
    throw NotPSD(std::string(what) + " is not positive semidefinite (lambda_1 = " +
                 std::to_string(lo) + ")");
  }
}

}  // namespace

FunctionalSpec::FunctionalSpec(CMatrix weight) : weight_(std::move(weight)) {
  require_valid(weight_, "functional weight");
  require_hermitian(weight_, "functional weight");
  const auto spec = eig_hermitian(weight_);
  if (spec.min() < -tol::psd * std::max(1.0, spec.max())) {
    throw NotPSD("functional weight has a negative eigenvalue");
  }
  const double tr = trace(weight_).real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw std::invalid_argument("functional weight must have unit trace (got " +
                                std::to_string(tr) + ")");
  }
}

FunctionalSpec FunctionalSpec::normalized_trace(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  return FunctionalSpec(CMatrix::Identity(n, n) / static_cast<double>(n));
}

FunctionalSpec FunctionalSpec::normalized(CMatrix weight) {
  require_valid(weight, "functional weight");
  const double tr = trace(weight).real();
  if (!(tr > 0.0)) throw std::invalid_argument("functional weight must have positive trace");
  return FunctionalSpec(weight / tr);
}

void require_valid(const CMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + " must be square and nonempty");
  }
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

CMatrix skew_part(const CMatrix& m) { return (m - m.adjoint()) / (2.0 * kI); }

double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

bool is_hermitian(const CMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  return hermitian_defect(m) <= rel_tol * m.norm();
}

Spectrum eig_hermitian(const CMatrix& h) {
  require_valid(h, "eigenvalue argument");
  require_hermitian(h, "eigenvalue argument");
  const auto solver = hermitian_solver(h, false);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  Spectrum out;
  out.values.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.values.begin(), out.values.end());
  return out;
}

CMatrix sqrt_psd(const CMatrix& h) {
  require_valid(h, "sqrt argument");
  require_hermitian(h, "sqrt argument");
  const auto solver = hermitian_solver(h, true);
  require_psd(solver.eigenvalues(), "sqrt argument");
  // Eigenvalues at the roundoff level of the spectrum are zeros; their square roots would
  // otherwise leave sqrt(eps)-sized noise in the null space.
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double floor = 8.0 * static_cast<double>(h.rows()) * std::numeric_limits<double>::epsilon() *
                       std::max(0.0, ev.cwiseAbs().maxCoeff());
  const Eigen::VectorXd root = ev.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  const CMatrix& u = solver.eigenvectors();
  CMatrix r = u * root.cast<Complex>().asDiagonal() * u.adjoint();
  return hermitian_part(r);
}

double functional(const FunctionalSpec& g, const CMatrix& m) {
  require_hermitian(m, "functional argument");
  return functional_general(g, m).real();
}

Complex functional_general(const FunctionalSpec& g, const CMatrix& m) {
  if (m.rows() != g.dim() || m.cols() != g.dim()) {
    throw std::invalid_argument("functional argument has the wrong dimension");
  }
  // tr(W M) without forming the product.
  return (g.weight().transpose().cwiseProduct(m)).sum();
}

namespace {

// Returns the eigen-decomposition of a PSD matrix together with a singularity flag.
struct PsdInverse {
  bool singular = false;
  CMatrix inverse;
};

PsdInverse psd_inverse(const CMatrix& m, const char* what) {
  require_valid(m, what);
  require_hermitian(m, what);
  const auto solver = hermitian_solver(m, true);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  require_psd(ev, what);
  const double smax = ev.cwiseAbs().maxCoeff();
  const double smin = ev.cwiseAbs().minCoeff();
  PsdInverse out;
  if (smax == 0.0 || smin <= tol::sing * smax) {
    out.singular = true;
    return out;
  }
  const CMatrix& u = solver.eigenvectors();
  out.inverse = u * ev.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
  return out;
}

}  // namespace

double nu_g(const FunctionalSpec& g, const CMatrix& m) {
  const auto inv = psd_inverse(m, "nu_g argument");
  if (inv.singular) return 0.0;
  return 1.0 / functional_general(g, inv.inverse).real();
}

double nu_0(const CMatrix& b) {
  const auto inv = psd_inverse(b, "nu_0 argument");
  if (inv.singular) return 0.0;
  return 1.0 / trace(inv.inverse).real();
}

double trace_product_lower_bound(const CMatrix& s, const CMatrix& h) {
  require_valid(s, "S");
  require_valid(h, "H");
  if (s.rows() != h.rows()) throw std::invalid_argument("S and H dimensions differ");
  require_hermitian(h, "H");
  const auto solver = hermitian_solver(h, false);
  require_psd(solver.eigenvalues(), "H");
  const double lambda1 = std::max(0.0, solver.eigenvalues().minCoeff());
  const double re = trace(hermitian_part(s)).real();
  const double im = trace(skew_part(s)).real();
  return lambda1 / static_cast<double>(s.rows()) * (re * re + im * im);
}

std::vector<double> singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

Eigen::Index numerical_rank(const CMatrix& m, double rel_tol) {
  const auto sv = singular_values(m);
  if (sv.empty()) return 0;
  const double cut = rel_tol * std::max(1.0, sv.front());
  return std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; });
}

CMatrix pinv(const CMatrix& m, double rel_tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

CMatrix inverse_hpd(const CMatrix& b) {
  Eigen::LLT<CMatrix> llt(hermitian_part(b));
  if (llt.info() != Eigen::Success) throw NotPSD("matrix is not positive definite");
  return llt.solve(CMatrix::Identity(b.rows(), b.cols()));
}

Complex trace(const CMatrix& m) { return m.trace(); }

}  // namespace hamosc::matlin
