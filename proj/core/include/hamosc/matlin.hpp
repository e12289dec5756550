#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hamosc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical thresholds shared across modules.
namespace tol {
inline constexpr double herm = 1e-10;  // relative Hermiticity defect
inline constexpr double sing = 1e-12;  // sigma_min / sigma_max below this is singular
inline constexpr double psd = 1e-10;   // admissible negative eigenvalue slack
inline constexpr double ineq = 1e-10;  // slack for inequality checks
inline constexpr double rank = 1e-9;   // relative singular value cutoff for rank tests
}  // namespace tol

namespace matlin {

/// Ascending real eigenvalues of a Hermitian matrix.
struct Spectrum {
  std::vector<double> values;

  double min() const { return values.front(); }
  double max() const { return values.back(); }
  std::size_t size() const { return values.size(); }
};

/// Positive linear functional M -> tr(W M) with W Hermitian, W >= 0 and tr W = 1.
class FunctionalSpec {
 public:
  /// Throws NotHermitian / NotPSD / std::invalid_argument (trace not 1).
  explicit FunctionalSpec(CMatrix weight);

  /// W = I/n, the normalized trace.
  static FunctionalSpec normalized_trace(Eigen::Index n);

  /// Rescales an arbitrary W >= 0 with positive trace to unit trace.
  static FunctionalSpec normalized(CMatrix weight);

  const CMatrix& weight() const noexcept { return weight_; }
  Eigen::Index dim() const noexcept { return weight_.rows(); }

 private:
  CMatrix weight_;
};

/// Throws std::invalid_argument unless M is square, nonempty and finite.
void require_valid(const CMatrix& m, const char* what = "matrix");

CMatrix hermitian_part(const CMatrix& m);

/// (M - M*)/(2i); Hermitian, and M = hermitian_part(M) + i * skew_part(M).
CMatrix skew_part(const CMatrix& m);

/// ||M - M*||_F
double hermitian_defect(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double rel_tol = tol::herm);

/// Ascending eigenvalues of (H + H*)/2. Throws NotHermitian on a relative defect above tol::herm.
Spectrum eig_hermitian(const CMatrix& h);

/// Hermitian square root of H >= 0; negative eigenvalues within slack are clipped to 0.
CMatrix sqrt_psd(const CMatrix& h);

/// g(M) = tr(W M) for Hermitian M.
double functional(const FunctionalSpec& g, const CMatrix& m);

/// tr(W M) for an arbitrary square M.
Complex functional_general(const FunctionalSpec& g, const CMatrix& m);

/// 0 if M is numerically singular, else 1 / g(M^{-1}). M must be Hermitian PSD.
double nu_g(const FunctionalSpec& g, const CMatrix& m);

/// 0 if B is numerically singular, else 1 / tr(B^{-1}). B must be Hermitian PSD.
double nu_0(const CMatrix& b);

/// (lambda_1(H)/n) * ([tr Re S]^2 + [tr Im S]^2), a lower bound for tr(S H S*).
double trace_product_lower_bound(const CMatrix& s, const CMatrix& h);

std::vector<double> singular_values(const CMatrix& m);

/// Number of singular values above rel_tol * max(1, sigma_max).
Eigen::Index numerical_rank(const CMatrix& m, double rel_tol = tol::rank);

/// Moore-Penrose pseudo-inverse with the same cutoff as numerical_rank.
CMatrix pinv(const CMatrix& m, double rel_tol = tol::rank);

/// Inverse of a Hermitian positive definite matrix; throws NotPSD if not definite.
CMatrix inverse_hpd(const CMatrix& b);

Complex trace(const CMatrix& m);

}  // namespace matlin
}  // namespace hamosc
