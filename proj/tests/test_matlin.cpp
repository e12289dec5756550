#include <gtest/gtest.h>

#include "hamosc/errors.hpp"
#include "hamosc/matlin.hpp"
#include "support/oracles.hpp"

using namespace hamosc;
using namespace hamosc::matlin;

namespace {
const Complex I1{0.0, 1.0};

CMatrix diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  Eigen::Index i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}
}  // namespace

TEST(HermitianParts, IdentityIsHermitian) {
  const CMatrix I = CMatrix::Identity(3, 3);
  EXPECT_TRUE(hermitian_part(I).isApprox(I));
  EXPECT_EQ(skew_part(I).norm(), 0.0);
}

TEST(HermitianParts, RotationGenerator) {
  CMatrix m(2, 2);
  m << 0, 1, -1, 0;
  EXPECT_EQ(hermitian_part(m).norm(), 0.0);
  // (M - M^T)/(2i) computed entrywise: off-diagonals 2/(2i) = -i and -2/(2i) = i.
  const CMatrix k = skew_part(m);
  EXPECT_NEAR(std::abs(k(0, 1) - (-I1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k(1, 0) - I1), 0.0, 1e-15);
  EXPECT_EQ(k(0, 0), Complex(0.0));
  EXPECT_TRUE(is_hermitian(k));
}

TEST(HermitianParts, ReconstructionIdentity) {
  oracle::Rng r(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix m = r.complex_matrix(r.integer(1, 5));
    const CMatrix back = hermitian_part(m) + I1 * skew_part(m);
    EXPECT_LE((back - m).norm(), 1e-14 * (1.0 + m.norm()));
    EXPECT_TRUE(is_hermitian(hermitian_part(m)));
    EXPECT_TRUE(is_hermitian(skew_part(m)));
  }
}

TEST(EigHermitian, DiagonalAndIdentity) {
  const auto s = eig_hermitian(diag({2, 1}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  EXPECT_DOUBLE_EQ(s.values[1], 2.0);
  const auto id = eig_hermitian(CMatrix::Identity(3, 3));
  for (double v : id.values) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(EigHermitian, MatchesCharacteristicPolynomialRoots) {
  oracle::Rng r(12);
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix h = r.hermitian(3);
    const auto expect = oracle::eigenvalues_by_bisection(h);
    const auto got = eig_hermitian(h);
    ASSERT_EQ(expect.size(), 3u) << "oracle missed a root";
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(got.values[i], expect[i], 1e-10);
  }
}

TEST(EigHermitian, AscendingOrder) {
  oracle::Rng r(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = eig_hermitian(r.hermitian(r.integer(1, 6)));
    EXPECT_TRUE(std::is_sorted(s.values.begin(), s.values.end()));
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(eig_hermitian(m), NotHermitian);
}

TEST(MatrixValidity, RejectsNonFinite) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(require_valid(m), std::invalid_argument);
  EXPECT_THROW(require_valid(CMatrix(0, 0)), std::invalid_argument);
}

TEST(SqrtPsd, ClosedForms) {
  EXPECT_TRUE(sqrt_psd(CMatrix::Identity(3, 3)).isApprox(CMatrix::Identity(3, 3)));
  EXPECT_LE((sqrt_psd(diag({4, 9})) - diag({2, 3})).norm(), 1e-14);
}

TEST(SqrtPsd, SquaresBack) {
  oracle::Rng r(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = r.integer(1, 5);
    const CMatrix g = r.complex_matrix(n);
    const CMatrix h = g * g.adjoint();
    const CMatrix root = sqrt_psd(h);
    EXPECT_LE((root * root - h).norm(), 1e-10 * h.norm());
    EXPECT_TRUE(is_hermitian(root));
    EXPECT_GE(eig_hermitian(root).min(), -1e-12);
  }
}

TEST(SqrtPsd, ProjectionIsFixed) {
  oracle::Rng r(15);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix q = r.complex_matrix(4).householderQr().householderQ();
    const CMatrix basis = q.leftCols(2);
    const CMatrix proj = basis * basis.adjoint();
    EXPECT_LE((sqrt_psd(proj) - proj).norm(), 1e-12);
  }
}

TEST(SqrtPsd, RejectsIndefinite) { EXPECT_THROW(sqrt_psd(diag({1, -1})), NotPSD); }

TEST(Functional, ClosedForms) {
  EXPECT_NEAR(functional(FunctionalSpec::normalized_trace(3), CMatrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(functional(FunctionalSpec(diag({1, 0})), diag({3, 5})), 3.0, 1e-15);
}

TEST(Functional, WeightMustBeNormalizedPsd) {
  EXPECT_THROW(FunctionalSpec(diag({1, 1})), std::invalid_argument);
  EXPECT_THROW(FunctionalSpec(diag({2, -1})), NotPSD);
  CMatrix w(2, 2);
  w << 0.5, 1, 0, 0.5;
  EXPECT_THROW(FunctionalSpec{w}, NotHermitian);
}

TEST(Functional, RejectsNonHermitianArgument) {
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(functional(FunctionalSpec::normalized_trace(2), m), NotHermitian);
}

TEST(NuG, ClosedForms) {
  const auto g2 = FunctionalSpec::normalized_trace(2);
  EXPECT_NEAR(nu_g(g2, CMatrix::Identity(2, 2)), 1.0, 1e-15);
  EXPECT_EQ(nu_g(g2, diag({1, 0})), 0.0);
  EXPECT_NEAR(nu_g(g2, diag({1, 2})), 4.0 / 3.0, 1e-15);
  EXPECT_THROW(nu_g(g2, diag({1, -2})), NotPSD);
}

TEST(Nu0, ClosedForms) {
  EXPECT_NEAR(nu_0(CMatrix::Identity(2, 2)), 0.5, 1e-15);
  EXPECT_EQ(nu_0(diag({1, 0})), 0.0);
  const double v = nu_0(diag({1, 2}));
  EXPECT_NEAR(v, 2.0 / 3.0, 1e-15);
  EXPECT_LE(v, 1.0);
  EXPECT_LE(1.0, 2.0 * v);
}

// The chain nu_g(B) <= lambda_1(B) does not hold for a normalized functional: with
// W = I/2, B = diag(1, 2) the value is 4/3 > 1. The eigenvalue bracket of g gives instead
// lambda_1(B) <= nu_g(B) <= lambda_n(B) <= tr B.
TEST(NuG, ReciprocalFunctionalBracket) {
  const auto g2 = FunctionalSpec::normalized_trace(2);
  EXPECT_GT(nu_g(g2, diag({1, 2})), 1.0);
  oracle::Rng r(16);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = r.integer(1, 5);
    const CMatrix b = r.hpd(n);
    const auto g = FunctionalSpec::normalized(r.psd(n, r.integer(1, n)));
    const auto s = eig_hermitian(b);
    const double v = nu_g(g, b);
    EXPECT_LE(s.min(), v + 1e-10 * s.max());
    EXPECT_LE(v, s.max() + 1e-10 * s.max());
    EXPECT_LE(s.max(), trace(b).real() + 1e-10);
  }
}

TEST(TraceProductBound, ClosedForms) {
  EXPECT_NEAR(trace_product_lower_bound(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), 2.0, 1e-15);
  oracle::Rng r(17);
  EXPECT_EQ(trace_product_lower_bound(r.complex_matrix(3), CMatrix::Zero(3, 3)), 0.0);
  EXPECT_THROW(trace_product_lower_bound(CMatrix::Identity(2, 2), diag({1, -1})), NotPSD);
}

// Direct evaluation of tr(S H S*) against the bound, 100 random pairs.
TEST(TraceProductBound, RandomPairs) {
  oracle::Rng r(18);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = r.integer(1, 5);
    const CMatrix s = r.complex_matrix(n);
    const CMatrix h = r.psd(n, r.integer(1, n));
    Complex lhs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) lhs += s(i, j) * h(j, k) * std::conj(s(i, k));
    EXPECT_GE(lhs.real() - trace_product_lower_bound(s, h), -1e-10);
  }
}

TEST(Rank, PinvAndRank) {
  EXPECT_EQ(numerical_rank(diag({1, 0, 2})), 2);
  const CMatrix p = pinv(diag({2, 0}));
  EXPECT_NEAR(p(0, 0).real(), 0.5, 1e-15);
  EXPECT_EQ(p(1, 1), Complex(0.0));
  oracle::Rng r(19);
  const CMatrix a = r.complex_matrix(4);
  EXPECT_LE((pinv(a) * a - CMatrix::Identity(4, 4)).norm(), 1e-9);
}
