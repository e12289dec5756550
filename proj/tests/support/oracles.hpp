// Independent reference computations for the test suites. Nothing here calls into the
// library's numerical routines.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a = -1.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(gen_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::uint64_t bits() { return gen_(); }

  CMatrix complex_matrix(Eigen::Index n, double scale = 1.0) {
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(uniform(), uniform()) * scale;
    return m;
  }
  CMatrix real_matrix(Eigen::Index n, double scale = 1.0) {
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = uniform() * scale;
    return m;
  }
  CMatrix hermitian(Eigen::Index n, double scale = 1.0) {
    const CMatrix g = complex_matrix(n, scale);
    return (g + g.adjoint()) * 0.5;
  }
  // G G* + shift I, positive definite for shift > 0.
  CMatrix hpd(Eigen::Index n, double shift = 0.1) {
    const CMatrix g = complex_matrix(n);
    return g * g.adjoint() + shift * CMatrix::Identity(n, n);
  }
  CMatrix psd(Eigen::Index n, Eigen::Index rank) {
    CMatrix g = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < rank; ++k) {
      Eigen::VectorXcd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(uniform(), uniform());
      g += v * v.adjoint();
    }
    return g;
  }

 private:
  std::mt19937_64 gen_;
};

inline Complex trace(const CMatrix& m) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

// Characteristic polynomial det(xI - H) by Faddeev-LeVerrier; c[k] multiplies x^(n-k).
inline std::vector<Complex> char_poly(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  std::vector<Complex> c(n + 1);
  c[0] = 1.0;
  CMatrix m = CMatrix::Zero(n, n);
  const CMatrix I = CMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = h * m + c[k - 1] * I;
    c[k] = -trace(h * m) / static_cast<double>(k);
  }
  return c;
}

inline double poly_eval(const std::vector<Complex>& c, double x) {
  long double acc = 0.0L;
  for (const auto& ck : c) acc = acc * x + static_cast<long double>(ck.real());
  return static_cast<double>(acc);
}

// Eigenvalues of a Hermitian matrix as the real roots of its characteristic polynomial,
// bracketed on a fine scan of the Gershgorin interval and refined by bisection.
inline std::vector<double> eigenvalues_by_bisection(const CMatrix& h, int scan = 20000) {
  const Eigen::Index n = h.rows();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = std::abs(h(i, i));
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) r += std::abs(h(i, j));
    radius = std::max(radius, r);
  }
  radius = radius * 1.01 + 1e-12;
  const auto c = char_poly(h);
  std::vector<double> roots;
  double x0 = -radius, f0 = poly_eval(c, x0);
  for (int k = 1; k <= scan; ++k) {
    const double x1 = -radius + 2.0 * radius * k / scan;
    const double f1 = poly_eval(c, x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = poly_eval(c, m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

// Real parts of the eigenvalues from the general (non-Hermitian) Schur solver, ascending.
// Unlike the characteristic polynomial scan this resolves repeated eigenvalues.
inline std::vector<double> eigenvalues_general(const CMatrix& h) {
  Eigen::ComplexEigenSolver<CMatrix> es(h, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

// Classical fixed-step RK4 on a real vector state.
using VecFn = std::function<std::vector<double>(double, const std::vector<double>&)>;
inline std::vector<double> rk4(const VecFn& f, std::vector<double> y, double t0, double t1,
                               int steps) {
  const double h = (t1 - t0) / steps;
  auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    const auto k1 = f(t, y);
    const auto k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const auto k4 = f(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t = t0 + (k + 1) * h;
  }
  return y;
}

// Matrix system [Phi; Psi]' = [[A, B], [C, mu I - A*]] [Phi; Psi] by fixed-step RK4.
using MatFn = std::function<CMatrix(double)>;
struct PhiPsi {
  CMatrix phi, psi;
};
inline PhiPsi rk4_system(const MatFn& A, const MatFn& B, const MatFn& C,
                         const std::function<double(double)>& mu, PhiPsi s, double t0, double t1,
                         int steps) {
  const Eigen::Index n = s.phi.rows();
  auto rhs = [&](double t, const PhiPsi& x) {
    const CMatrix a = A(t);
    return PhiPsi{a * x.phi + B(t) * x.psi,
                  C(t) * x.phi + (mu(t) * CMatrix::Identity(n, n) - a.adjoint()) * x.psi};
  };
  auto add = [](const PhiPsi& x, double h, const PhiPsi& k) {
    return PhiPsi{x.phi + h * k.phi, x.psi + h * k.psi};
  };
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const auto k1 = rhs(t, s);
    const auto k2 = rhs(t + h / 2, add(s, h / 2, k1));
    const auto k3 = rhs(t + h / 2, add(s, h / 2, k2));
    const auto k4 = rhs(t + h, add(s, h, k3));
    s.phi += h / 6 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    s.psi += h / 6 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
  }
  return s;
}

}  // namespace oracle
