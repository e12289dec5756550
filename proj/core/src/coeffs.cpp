#include "hamosc/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hamosc/errors.hpp"

namespace hamosc {

namespace {

std::string entry_name(const std::string& name, Eigen::Index i, Eigen::Index j) {
  return name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

bool is_literal_zero(const ScalarExpr& e) {
  return e.node().kind == ScalarExpr::Kind::Number && e.node().value == 0.0;
}

}  // namespace

TimeMatrix::TimeMatrix(std::string name, Eigen::Index n, std::vector<ComplexExpr> entries)
    : name_(std::move(name)), n_(n), entries_(std::move(entries)) {
  if (n_ < 1 || static_cast<Eigen::Index>(entries_.size()) != n_ * n_) {
    throw std::invalid_argument(name_ + ": expected " + std::to_string(n_ * n_) + " entries");
  }
  for (const auto& e : entries_) {
    real_ = real_ && is_literal_zero(e.im);
    constant_ = constant_ && e.re.is_constant() && e.im.is_constant();
  }
  if (constant_) {
    try {
      cached_ = eval(0.0);
    } catch (const DomainError&) {
      // Left uncached; every eval reports the error.
    }
  }
}

TimeMatrix TimeMatrix::constant(std::string name, const CMatrix& value) {
  const Eigen::Index n = value.rows();
  std::vector<ComplexExpr> entries;
  entries.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      entries.push_back({ScalarExpr::constant(value(i, j).real()),
                         ScalarExpr::constant(value(i, j).imag())});
    }
  }
  return TimeMatrix(std::move(name), n, std::move(entries));
}

CMatrix TimeMatrix::eval(double t) const {
  if (constant_ && cached_) return *cached_;
  CMatrix out(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = 0; j < n_; ++j) {
      const auto& e = entries_[static_cast<std::size_t>(i * n_ + j)];
      try {
        out(i, j) = Complex(e.re.eval(t), real_ ? 0.0 : e.im.eval(t));
      } catch (const DomainError& err) {
        throw DomainError(err.what(), t, entry_name(name_, i, j));
      }
    }
  }
  return out;
}

CMatrix eval_matrix(const TimeMatrix& m, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evaluation time must be finite");
  return m.eval(t);
}

double derivative_fd(const ScalarExpr& f, double t) {
  if (f.is_constant()) return 0.0;
  return derivative5([&f](double s) { return f.eval(s); }, t);
}

std::optional<ScalarSystemSpec> as_scalar_system(const SystemSpec& spec) {
  if (spec.n != 1 || !spec.is_real()) return std::nullopt;
  ScalarSystemSpec s;
  s.a11 = spec.A.entry(0, 0).re;
  s.a12 = spec.B.entry(0, 0).re;
  s.a21 = spec.C.entry(0, 0).re;
  s.a22 = ScalarExpr::binary(ScalarExpr::Kind::Sub, spec.mu, spec.A.entry(0, 0).re);
  s.t0 = spec.t0;
  return s;
}

std::vector<double> chebyshev_points(double a, double b, int count) {
  if (count < 2) throw std::invalid_argument("need at least two sample points");
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double x = -std::cos(std::numbers::pi * k / (count - 1));
    pts[static_cast<std::size_t>(k)] = 0.5 * (a + b) + 0.5 * (b - a) * x;
  }
  pts.front() = a;
  pts.back() = b;
  return pts;
}

namespace {

// Records the worst asymmetric entry of a matrix that failed the Hermitian check.
void flag_hermitian(const CMatrix& m, const std::string& name, double t,
                    std::vector<ValidationIssue>& issues) {
  Eigen::Index bi = 0, bj = 0;
  double worst = -1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        bi = i;
        bj = j;
      }
    }
  }
  issues.push_back({"hermitian", entry_name(name, bi, bj), t,
                    name + " is not Hermitian: |" + entry_name(name, bi, bj) + " - conj(" +
                        entry_name(name, bj, bi) + ")| = " + std::to_string(worst)});
}

double eval_named(const ScalarExpr& e, const char* name, double t) {
  try {
    return e.eval(t);
  } catch (const DomainError& err) {
    throw DomainError(err.what(), t, name);
  }
}

}  // namespace

ValidationReport validate(const SystemSpec& spec, int sample_count) {
  ValidationReport report;
  report.sample_times = chebyshev_points(spec.t0, spec.t0 + kValidationHorizon, sample_count);
  bool flagged_b = false, flagged_c = false, flagged_p = false, flagged_eval = false;
  for (const double t : report.sample_times) {
    try {
      const CMatrix b = spec.B.eval(t);
      const CMatrix c = spec.C.eval(t);
      spec.A.eval(t);
      const double p = eval_named(spec.p, "p", t);
      eval_named(spec.mu, "mu", t);
      if (!matlin::is_hermitian(b)) {
        report.hermitian_B = false;
        if (!flagged_b) flag_hermitian(b, spec.B.name(), t, report.issues);
        flagged_b = true;
      } else if (report.B_positive_definite) {
        const auto s = matlin::eig_hermitian(b);
        if (!(s.min() > tol::sing * std::max(1.0, std::abs(s.max())))) {
          report.B_positive_definite = false;
        }
      }
      if (!matlin::is_hermitian(c)) {
        report.hermitian_C = false;
        if (!flagged_c) flag_hermitian(c, spec.C.name(), t, report.issues);
        flagged_c = true;
      }
      if (!(p > 0.0)) {
        report.p_positive = false;
        if (!flagged_p) {
          report.issues.push_back({"p_positive", "p", t, "p(t) = " + std::to_string(p)});
        }
        flagged_p = true;
      }
    } catch (const DomainError& err) {
      report.evaluable = false;
      if (!flagged_eval) {
        report.issues.push_back({"evaluable", err.where(), t, err.what()});
      }
      flagged_eval = true;
    }
  }
  if (!report.hermitian_B) report.B_positive_definite = false;
  return report;
}

}  // namespace hamosc
