#include "hamosc/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hamosc/errors.hpp"

namespace hamosc::criteria {

const char* to_string(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::Diverges: return "diverges-evidence";
    case DivergenceVerdict::Bounded: return "bounded-evidence";
    case DivergenceVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void check_opts(double t0, const DivergenceOpts& opts) {
  if (opts.checkpoints < 4) throw ConfigError("divergence estimate needs at least 4 checkpoints");
  if (opts.checkpoints > 40) throw ConfigError("too many checkpoints");
  if (!(opts.t_max > t0)) throw ConfigError("T_max must exceed t0");
  if (!(opts.flat_tol > 0.0)) throw ConfigError("flat tolerance must be positive");
}

}  // namespace

std::vector<double> checkpoint_times(double t0, const DivergenceOpts& opts) {
  check_opts(t0, opts);
  std::vector<double> out;
  const int m = opts.checkpoints;
  for (int k = 1; k <= m; ++k) out.push_back(t0 + (opts.t_max - t0) * std::ldexp(1.0, k - m));
  return out;
}

DivergenceEstimate classify(std::string name, std::vector<Checkpoint> checkpoints,
                            const DivergenceOpts& opts) {
  DivergenceEstimate est;
  est.name = std::move(name);
  est.checkpoints = std::move(checkpoints);
  const auto& c = est.checkpoints;
  if (c.size() < 4) throw ConfigError("divergence estimate needs at least 4 checkpoints");
  est.final_value = c.back().value;
  for (std::size_t k = c.size() - 1; k > 0; --k) {
    if (c[k].value > c[k - 1].value) {
      ++est.monotone_tail;
    } else {
      break;
    }
  }
  bool finite = true;
  for (const auto& cp : c) finite = finite && std::isfinite(cp.value);
  bool flat = finite;
  for (std::size_t k = c.size() - 3; k < c.size(); ++k) {
    flat = flat && std::abs(c[k].value - c[k - 1].value) < opts.flat_tol;
  }
  if (finite && est.monotone_tail >= 3 && est.final_value > opts.threshold) {
    est.verdict = DivergenceVerdict::Diverges;
  } else if (flat) {
    est.verdict = DivergenceVerdict::Bounded;
  } else {
    est.verdict = DivergenceVerdict::Inconclusive;
  }
  return est;
}

DivergenceEstimate divergence_estimate(std::string name,
                                       const std::function<double(double)>& series, double t0,
                                       const DivergenceOpts& opts) {
  std::vector<Checkpoint> cps;
  for (const double t : checkpoint_times(t0, opts)) cps.push_back({t, series(t)});
  return classify(std::move(name), std::move(cps), opts);
}

CheckpointGrid checkpoint_grid(double t0, const DivergenceOpts& opts, double max_h,
                               std::size_t max_nodes) {
  check_opts(t0, opts);
  const double len = opts.t_max - t0;
  const std::size_t base = std::size_t{1} << (opts.checkpoints - 1);  // T_1 sits at node q
  std::size_t q = static_cast<std::size_t>(std::ceil(len / (static_cast<double>(base) * max_h)));
  q = std::max<std::size_t>(q, 2);
  while (q > 2 && base * q + 1 > max_nodes) q /= 2;
  const std::size_t intervals = base * q;
  CheckpointGrid g;
  g.t.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    g.t[i] = t0 + len * (static_cast<double>(i) / static_cast<double>(intervals));
  }
  g.t.back() = opts.t_max;
  for (int k = 1; k <= opts.checkpoints; ++k) {
    g.checkpoint_index.push_back(q * (std::size_t{1} << (k - 1)));
  }
  return g;
}

DivergenceEstimate classify_on_grid(std::string name, const CheckpointGrid& grid,
                                    const std::vector<double>& values, const DivergenceOpts& opts) {
  if (values.size() != grid.t.size()) throw GridMismatch("series and grid differ in length");
  std::vector<Checkpoint> cps;
  for (const auto i : grid.checkpoint_index) cps.push_back({grid.t[i], values[i]});
  return classify(std::move(name), std::move(cps), opts);
}

}  // namespace hamosc::criteria
