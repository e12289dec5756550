#include "hamosc/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

#include "hamosc/errors.hpp"

namespace hamosc::quad {

std::vector<double> uniform_grid(double a, double b, std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("grid needs at least one interval");
  std::vector<double> g(intervals + 1);
  const double h = (b - a) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = a + h * static_cast<double>(i);
  g.back() = b;
  return g;
}

std::vector<double> cumulative_simpson(std::span<const double> grid, const Integrand& f) {
  std::vector<double> out(grid.size(), 0.0);
  if (grid.empty()) return out;
  double left = f(grid[0]);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    if (!(b > a)) throw GridMismatch("grid must be strictly increasing");
    const double mid = f(0.5 * (a + b));
    const double right = f(b);
    out[i + 1] = out[i] + (b - a) / 6.0 * (left + 4.0 * mid + right);
    left = right;
  }
  return out;
}

namespace {

// Integral over [a, b] of the polynomial interpolating the m <= 4 points (x[k], y[k]). Three
// Gauss-Legendre nodes integrate the cubic exactly.
double interpolant_integral(const double* x, const double* y, int m, double a, double b) {
  static constexpr double kNode = 0.7745966692414834;  // sqrt(3/5)
  static constexpr double kNodes[3] = {-kNode, 0.0, kNode};
  static constexpr double kWeights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double total = 0.0;
  for (int g = 0; g < 3; ++g) {
    const double s = mid + half * kNodes[g];
    double value = 0.0;
    for (int k = 0; k < m; ++k) {
      double basis = 1.0;
      for (int j = 0; j < m; ++j) {
        if (j != k) basis *= (s - x[j]) / (x[k] - x[j]);
      }
      value += y[k] * basis;
    }
    total += kWeights[g] * value;
  }
  return half * total;
}

}  // namespace

std::vector<double> cumulative_integral_of_samples(std::span<const double> grid,
                                                   std::span<const double> values) {
  if (grid.size() != values.size()) throw GridMismatch("grid and samples differ in length");
  std::vector<double> out(grid.size(), 0.0);
  if (grid.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw GridMismatch("grid must be strictly increasing");
  }
  if (grid.size() == 2) {
    out[1] = 0.5 * (grid[1] - grid[0]) * (values[0] + values[1]);
    return out;
  }
  // Each interval uses the cubic through the four nearest samples (a quadratic when only
  // three exist).
  const std::size_t n = grid.size();
  const int m = n >= 4 ? 4 : 3;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t s = i == 0 ? 0 : i - 1;
    s = std::min(s, n - static_cast<std::size_t>(m));
    out[i + 1] = out[i] + interpolant_integral(&grid[s], &values[s], m, grid[i], grid[i + 1]);
  }
  return out;
}

std::vector<double> with_midpoints(std::span<const double> grid) {
  std::vector<double> out;
  if (grid.empty()) return out;
  out.reserve(2 * grid.size() - 1);
  out.push_back(grid[0]);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw GridMismatch("grid must be strictly increasing");
    out.push_back(0.5 * (grid[i] + grid[i + 1]));
    out.push_back(grid[i + 1]);
  }
  return out;
}

std::vector<double> cumulative_simpson_interleaved(std::span<const double> grid,
                                                   std::span<const double> fine_values) {
  if (grid.empty() || fine_values.size() != 2 * grid.size() - 1) {
    throw GridMismatch("interleaved samples do not match the grid");
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    out[i + 1] = out[i] + h / 6.0 * (fine_values[2 * i] + 4.0 * fine_values[2 * i + 1] +
                                     fine_values[2 * i + 2]);
  }
  return out;
}

double simpson(const Integrand& f, double a, double b, std::size_t intervals) {
  const auto g = uniform_grid(a, b, intervals);
  return cumulative_simpson(std::span<const double>(g), f).back();
}

}  // namespace hamosc::quad
