#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamosc/coeffs.hpp"
#include "hamosc/divergence.hpp"
#include "hamosc/matlin.hpp"

namespace hamosc::criteria {

/// Wire identifiers are the ones accepted by `hamosc criteria --theorem`.
enum class Theorem {
  Baseline,       // T1.1: shifted coefficients with a functional g and a gauge K
  Scalar,         // T2.1: n = 1 real system, two exponential-weighted integrals
  TraceIntegral,  // T3.1: int p lambda_1(B) and J
  EigenBound,     // T3.2: int p / tr(B^-1) and the Hermitian-part limit
  Factored,       // T3.3: J2 built from a solution F of S X M = M
};

const char* theorem_id(Theorem t);
std::optional<Theorem> parse_theorem(std::string_view id);
inline constexpr Theorem kAllTheorems[] = {Theorem::Baseline, Theorem::Scalar,
                                           Theorem::TraceIntegral, Theorem::EigenBound,
                                           Theorem::Factored};

enum class Verdict { OscillatoryEvidence, Inconclusive };
const char* to_string(Verdict v);

struct ConditionCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct CriterionReport {
  Theorem theorem = Theorem::TraceIntegral;
  bool applicable = false;
  std::string reason;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<DivergenceEstimate> estimates;
  std::vector<ConditionCheck> conditions;

  /// "oscillatory-evidence", "inconclusive" or "not-applicable".
  std::string status() const;
};

struct CriteriaOpts {
  DivergenceOpts divergence;
  double max_h = 0.05;           // quadrature spacing target on [t0, T_max]
  std::optional<CMatrix> K;      // baseline gauge, default 1e-3 I
  std::optional<CMatrix> g_weight;  // baseline functional weight, default I / n
};

/// Pointwise and running parts of J or J2 on a grid; total = sum of the four.
struct SummandSeries {
  std::vector<double> t;
  std::vector<double> boundary;   // pointwise term
  std::vector<double> quadratic;  // minus the running integral of the quadratic part
  std::vector<double> potential;  // minus the running integral of the C part
  std::vector<double> skew;       // running integral of the skew-Hermitian correction
  std::vector<double> total() const;
};

/// B(t) > 0 test used by the J and eigenvalue criteria: lambda_1 > sing * max(1, lambda_n).
bool positive_definite(const CMatrix& b);

/// J = -tr(H(A1) B1^-1) - int tr[(A1 B1^-1 A1* + A1* B1^-1 A1)/2 + C1]
///     + int (lambda_1(B1)/n) [tr(K(A1) B1^-1)]^2
/// with H(X) = (X + X*)/2, K(X) = (X - X*)/2i. Throws SingularB when B(t) is not positive
/// definite on the grid (midpoints included).
SummandSeries eval_J(const SystemSpec& spec, std::span<const double> grid);

/// 4 (-tr(H(A1) B1^-1) - int tr(H(A1) B1^-1 H(A1) + C1)); `quadratic` carries the H B^-1 H part.
SummandSeries eval_hermitian_limit(const SystemSpec& spec, std::span<const double> grid);

struct FSolution {
  CMatrix F;
  CMatrix M;      // A1 sqrt(B1) - sqrt(B1)'
  CMatrix sqrtB1;
  double residual = 0.0;  // ||sqrt(B1) F M - M||_F
  bool invertible = false;
};

/// Solves sqrt(B1) X M = M. With B1 > 0 the answer is sqrt(B1)^-1; otherwise the rank
/// condition range(M) in range(sqrt(B1)) is tested and the minimum norm solution returned.
/// Throws NoSolution.
FSolution solve_F(const SystemSpec& spec, double t);

using FProvider = std::function<FSolution(double)>;

/// J2 = -tr(A_F + A_F*)/2 - int tr(A_F A_F* + B C) + (1/n) int [tr K(A_F)]^2, A_F = F M.
SummandSeries eval_J2(const SystemSpec& spec, const FProvider& provider,
                      std::span<const double> grid);
SummandSeries eval_J2(const SystemSpec& spec, std::span<const double> grid);

CriterionReport trace_integral_verdict(const SystemSpec& spec, const CriteriaOpts& opts = {});
CriterionReport eigen_bound_verdict(const SystemSpec& spec, const CriteriaOpts& opts = {});
CriterionReport factored_verdict(const SystemSpec& spec, const CriteriaOpts& opts = {});
CriterionReport scalar_verdict(const ScalarSystemSpec& s, const CriteriaOpts& opts = {});
/// Scalar criterion on a SystemSpec; not applicable unless the spec is a real n = 1 system.
CriterionReport scalar_verdict(const SystemSpec& spec, const CriteriaOpts& opts = {});

/// Dispatches to the evaluator for `which` (the baseline one lives in baseline.hpp).
CriterionReport evaluate(Theorem which, const SystemSpec& spec, const CriteriaOpts& opts = {});

}  // namespace hamosc::criteria
