#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hamosc/expr.hpp"
#include "hamosc/matlin.hpp"

namespace hamosc {

/// One complex matrix entry as a pair of real expressions.
struct ComplexExpr {
  ScalarExpr re;
  ScalarExpr im;  // defaults to 0
};

/// n x n matrix of complex expressions in t (row-major entry order).
class TimeMatrix {
 public:
  TimeMatrix() = default;
  TimeMatrix(std::string name, Eigen::Index n, std::vector<ComplexExpr> entries);

  /// Matrix whose entries are the given constants.
  static TimeMatrix constant(std::string name, const CMatrix& value);

  Eigen::Index dim() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  const ComplexExpr& entry(Eigen::Index i, Eigen::Index j) const { return entries_[i * n_ + j]; }

  /// True when every imaginary part is the literal constant 0.
  bool is_real() const noexcept { return real_; }
  bool is_constant() const noexcept { return constant_; }

  /// Throws DomainError naming the entry, e.g. "B[0][1]".
  CMatrix eval(double t) const;

 private:
  std::string name_;
  Eigen::Index n_ = 0;
  std::vector<ComplexExpr> entries_;
  bool real_ = true;
  bool constant_ = true;
  std::optional<CMatrix> cached_;
};

CMatrix eval_matrix(const TimeMatrix& m, double t);

/// Step of the five-point derivative stencil: 2^-10, widened only when t is so large that
/// t +- h would lose most of its digits.
inline double fd_step(double t) { return 0x1p-10 * std::max(1.0, 1e-6 * std::abs(t)); }

/// Five-point central difference (error O(h^4)) of any callable returning a double or a matrix.
template <class F>
auto derivative5(F&& f, double t) {
  using R = std::decay_t<decltype(f(t))>;
  const double h = fd_step(t);
  const R near = f(t + h) - f(t - h);
  const R far = f(t + 2.0 * h) - f(t - 2.0 * h);
  return R((near * 8.0 - far) / (12.0 * h));
}

/// Derivative of an expression by the five-point stencil; 0 for constants.
double derivative_fd(const ScalarExpr& f, double t);

/// Extended matrix Hamiltonian system
///     Phi' = A Phi + B Psi,   Psi' = C Phi + (mu I - A*) Psi,   t >= t0,
/// together with the positive weight p used by the Riccati substitution Psi = p Y Phi.
struct SystemSpec {
  Eigen::Index n = 1;
  double t0 = 0.0;
  TimeMatrix A;
  TimeMatrix B;
  TimeMatrix C;
  ScalarExpr mu;
  ScalarExpr p = ScalarExpr::constant(1.0);

  bool is_real() const noexcept { return A.is_real() && B.is_real() && C.is_real(); }
  double dp(double t) const { return derivative_fd(p, t); }
};

/// Scalar first-order system phi' = a11 phi + a12 psi, psi' = a21 phi + a22 psi.
struct ScalarSystemSpec {
  ScalarExpr a11;
  ScalarExpr a12;
  ScalarExpr a21;
  ScalarExpr a22;
  double t0 = 0.0;

  /// E(t) = a11(t) - a22(t)
  double E(double t) const { return a11.eval(t) - a22.eval(t); }
};

/// The n = 1 real system viewed as a scalar system: a11 = A, a12 = B, a21 = C, a22 = mu - A.
/// Returns nullopt for n > 1 or complex coefficients.
std::optional<ScalarSystemSpec> as_scalar_system(const SystemSpec& spec);

struct ValidationIssue {
  std::string check;  // "hermitian", "p_positive", "evaluable"
  std::string entry;  // e.g. "C[0][1]" or "p"
  double t = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<double> sample_times;
  bool evaluable = true;
  bool hermitian_B = true;
  bool hermitian_C = true;
  bool p_positive = true;
  /// B(t) > 0 at every sample; informational, not a structural requirement.
  bool B_positive_definite = true;
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return evaluable && hermitian_B && hermitian_C && p_positive; }
};

inline constexpr int kDefaultValidationSamples = 257;
inline constexpr double kValidationHorizon = 100.0;

/// Chebyshev-Lobatto points on [a, b], ascending.
std::vector<double> chebyshev_points(double a, double b, int count);

/// Checks the structural hypotheses at `sample_count` Chebyshev points on [t0, t0 + 100].
ValidationReport validate(const SystemSpec& spec, int sample_count = kDefaultValidationSamples);

}  // namespace hamosc
