#include <gtest/gtest.h>

#include <cmath>

#include "hamosc/errors.hpp"
#include "hamosc/quadrature.hpp"
#include "hamosc/riccati.hpp"
#include "support/oracles.hpp"
#include "support/specs.hpp"

using namespace hamosc;
using namespace hamosc::riccati;

TEST(TransformedCoeffs, Identity) {
  oracle::Rng r(41);
  const CMatrix A = r.complex_matrix(3), B = r.hermitian(3), C = r.hermitian(3);
  const auto tc = transformed_coeffs(testspec::constant_spec(A, B, C), 1.0);
  EXPECT_EQ((tc.A1 - A).norm(), 0.0);
  EXPECT_EQ((tc.B1 - B).norm(), 0.0);
  EXPECT_EQ((tc.C1 - C).norm(), 0.0);
}

TEST(TransformedCoeffs, ExponentialP) {
  auto s = testspec::constant_spec(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
  s.p = parse_expr("exp(t)");
  const auto tc = transformed_coeffs(s, 0.7);
  EXPECT_LE((tc.A1 - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_LE((tc.B1 - std::exp(0.7) * CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LE((tc.C1 - std::exp(-0.7) * CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(TransformedCoeffs, SingularBlockRemovesShift) {
  const auto s = testspec::singular_block();
  for (double t : {0.0, 1.3, 42.0}) {
    const auto tc = transformed_coeffs(s, t);
    EXPECT_NEAR(std::abs(tc.A1(0, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(tc.A1(1, 0)), 0.0, 0.0);
    EXPECT_NEAR(tc.A1(0, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(tc.A1(1, 1).real(), 0.1 * std::sin(t), 1e-12);
  }
}

TEST(TransformedCoeffs, NonPositiveP) {
  auto s = testspec::skew_rotation();
  s.p = parse_expr("t - 1");
  EXPECT_THROW(transformed_coeffs(s, 0.5), NonPositiveP);
}

// With p = 1 and mu = 0 the original and transformed equations have identical residuals.
TEST(TransformedCoeffs, ResidualConjugacy) {
  oracle::Rng r(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = r.integer(1, 4);
    const auto s = testspec::random_smooth_spec(r, n, true, 0.5, 0.0);
    auto s0 = s;
    s0.mu = ScalarExpr::constant(0.0);
    const double t = r.uniform(0, 5);
    const CMatrix Y = r.complex_matrix(n), dY = r.complex_matrix(n);
    const CMatrix a = original_residual(s0, t, Y, dY);
    const CMatrix b = transformed_residual(transformed_coeffs(s0, t), Y, dY);
    EXPECT_LE((a - b).norm(), 1e-12 * (1 + a.norm()));
  }
}

TEST(Reconstruct, ZeroRiccatiKeepsPhiConstant) {
  const auto s = testspec::constant_spec(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
  const auto m = integrate_matrix_riccati(s, CMatrix::Zero(2, 2), 5.0);
  CMatrix phi1(2, 2);
  phi1 << 2, 1, 0, 1;
  const auto tr = reconstruct_solution(s, m, phi1);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_LE((tr.Phi[k] - phi1).norm(), 1e-14);
    EXPECT_EQ(tr.Psi[k].norm(), 0.0);
  }
  EXPECT_THROW(reconstruct_solution(s, m, phi1, 6.0), InterpolationGap);
}

TEST(Reconstruct, ScalarHarmonicMatchesDirect) {
  const auto s = testspec::constant_spec(CMatrix::Zero(1, 1), CMatrix::Identity(1, 1), -CMatrix::Identity(1, 1));
  // y = psi/phi for (phi, psi) = (cos t + 0.5 sin t, -sin t + 0.5 cos t); the pole sits near t = 2.03.
  IntegratorOpts tight;
  tight.rtol = 1e-11;
  tight.atol = 1e-13;
  const auto m = integrate_matrix_riccati(s, CMatrix::Constant(1, 1, 0.5), 1.8, tight);
  ASSERT_FALSE(m.escape.escaped);
  const auto tr = reconstruct_solution(s, m, CMatrix::Identity(1, 1), std::nullopt, tight);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    EXPECT_NEAR(std::abs(tr.Phi[k](0, 0) - (std::cos(t) + 0.5 * std::sin(t))), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(tr.Psi[k](0, 0) - (-std::sin(t) + 0.5 * std::cos(t))), 0.0, 1e-8);
  }
}

TEST(IntegralRiccati, TrivialResiduals) {
  IntegralRiccatiInstance inst{[](double) { return 0.0; }, [](double) { return 0.0; },
                               quad::uniform_grid(0, 1, 10)};
  for (double r : integral_riccati_residual(inst, std::vector<double>(11, 0.0))) EXPECT_EQ(r, 0.0);
  inst.e = [](double t) { return std::sin(t) + 2; };
  std::vector<double> y;
  for (double t : inst.grid) y.push_back(-(std::sin(t) + 2));
  for (double r : integral_riccati_residual(inst, y)) EXPECT_NEAR(r, 0.0, 1e-15);
  y.pop_back();
  EXPECT_THROW(integral_riccati_residual(inst, y), GridMismatch);
}

TEST(IntegralRiccati, DifferentiatedFormSolves) {
  // a = 1, e = t: y' + y^2 + 1 = 0, y(t0) = -t0.
  for (double t0 : {0.0, 0.3}) {
    IntegralRiccatiInstance inst{[](double) { return 1.0; }, [](double t) { return t; },
                                 quad::uniform_grid(t0, t0 + 1.0, 2000)};
    const auto sol = solve_integral_riccati(inst);
    ASSERT_FALSE(sol.escape.escaped);
    for (std::size_t i = 0; i < inst.grid.size(); ++i) {
      const double t = inst.grid[i];
      EXPECT_NEAR(sol.y[i], -std::tan(t - t0 + std::atan(t0)), 1e-7);
    }
    for (double r : integral_riccati_residual(inst, sol.y)) EXPECT_LE(std::abs(r), 1e-6);
  }
}

TEST(Comparison, ConstantCase) {
  const auto g = quad::uniform_grid(0, 1, 100);
  IntegralRiccatiInstance a{[](double) { return 0.0; }, [](double) { return 2.0; }, g};
  IntegralRiccatiInstance b{[](double) { return 0.0; }, [](double) { return 1.0; }, g};
  const auto rep = riccati_comparison_check(a, b, std::vector<double>(g.size(), -2.0));
  EXPECT_TRUE(rep.holds);
  EXPECT_NEAR(rep.min_gap, 1.0, 1e-12);
}

TEST(Comparison, QuadraticCase) {
  const auto g = quad::uniform_grid(0, 1, 2000);
  IntegralRiccatiInstance a{[](double) { return 0.2; }, [](double t) { return 2 + t * t; }, g};
  IntegralRiccatiInstance b{[](double) { return 0.2; }, [](double t) { return 1 + t * t / 2; }, g};
  const auto y0 = solve_integral_riccati(a).y;
  const auto rep = riccati_comparison_check(a, b, y0);
  EXPECT_TRUE(rep.holds);
  EXPECT_GT(rep.min_gap, 0.0);
}

TEST(Comparison, PreconditionsAreChecked) {
  const auto g = quad::uniform_grid(0, 1, 100);
  IntegralRiccatiInstance a{[](double) { return 0.0; }, [](double t) { return 1.0 + t; }, g};
  IntegralRiccatiInstance b{[](double) { return 0.0; }, [](double) { return 1.5; }, g};
  std::vector<double> y0;
  for (double t : g) y0.push_back(-(1.0 + t));
  try {
    riccati_comparison_check(a, b, y0);
    FAIL();
  } catch (const PreconditionViolated& e) {
    EXPECT_NE(std::string(e.what()).find("e(t) > e1(t)"), std::string::npos);
  }
  IntegralRiccatiInstance neg{[](double) { return -1.0; }, [](double) { return 3.0; }, g};
  IntegralRiccatiInstance neg1{[](double) { return -1.0; }, [](double) { return 1.0; }, g};
  EXPECT_THROW(riccati_comparison_check(neg, neg1, std::vector<double>(g.size(), -3.0)), PreconditionViolated);
  IntegralRiccatiInstance c{[](double) { return 0.0; }, [](double) { return 3.0; }, g};
  EXPECT_THROW(riccati_comparison_check(c, b, std::vector<double>(g.size(), 0.0)), PreconditionViolated);
}
