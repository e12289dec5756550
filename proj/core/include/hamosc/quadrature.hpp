#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hamosc::quad {

using Integrand = std::function<double(double)>;

/// a, a + h, ..., b with `intervals` equal pieces.
std::vector<double> uniform_grid(double a, double b, std::size_t intervals);

/// Running integral from grid[0] to each node, Simpson's rule on every interval
/// (the integrand is also evaluated at each midpoint).
std::vector<double> cumulative_simpson(std::span<const double> grid, const Integrand& f);

/// Running integral of samples on a possibly nonuniform grid; each interval integrates the
/// cubic through the four nearest samples. Throws GridMismatch on size mismatch.
std::vector<double> cumulative_integral_of_samples(std::span<const double> grid,
                                       std::span<const double> values);

/// Nodes and interval midpoints of `grid` interleaved: 2N + 1 points for N intervals.
std::vector<double> with_midpoints(std::span<const double> grid);

/// Running Simpson integral over `grid` of samples taken on with_midpoints(grid).
std::vector<double> cumulative_simpson_interleaved(std::span<const double> grid,
                                                   std::span<const double> fine_values);

/// Composite Simpson over [a, b].
double simpson(const Integrand& f, double a, double b, std::size_t intervals);

}  // namespace hamosc::quad
