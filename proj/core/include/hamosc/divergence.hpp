#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hamosc::criteria {

enum class DivergenceVerdict { Diverges, Bounded, Inconclusive };

const char* to_string(DivergenceVerdict v);

/// Checkpoints T_k = t0 + (T_max - t0) 2^(k-m), k = 1..m.
struct DivergenceOpts {
  double t_max = 200.0;  // absolute end time
  int checkpoints = 8;
  double threshold = 50.0;
  double flat_tol = 1e-3;
};

struct Checkpoint {
  double t = 0.0;
  double value = 0.0;
};

struct DivergenceEstimate {
  std::string name;
  std::vector<Checkpoint> checkpoints;
  int monotone_tail = 0;  // number of trailing strictly increasing steps
  double final_value = 0.0;
  DivergenceVerdict verdict = DivergenceVerdict::Inconclusive;
};

std::vector<double> checkpoint_times(double t0, const DivergenceOpts& opts);

/// Classifies a series given by its checkpoint values.
DivergenceEstimate classify(std::string name, std::vector<Checkpoint> checkpoints,
                            const DivergenceOpts& opts);

/// Evaluates `series` at the checkpoints and classifies it.
DivergenceEstimate divergence_estimate(std::string name,
                                       const std::function<double(double)>& series, double t0,
                                       const DivergenceOpts& opts);

/// Uniform grid on [t0, t_max] containing every checkpoint as a node, with spacing at most
/// `max_h` where that keeps the node count below `max_nodes`.
struct CheckpointGrid {
  std::vector<double> t;
  std::vector<std::size_t> checkpoint_index;
};
CheckpointGrid checkpoint_grid(double t0, const DivergenceOpts& opts, double max_h = 0.05,
                               std::size_t max_nodes = 1u << 18);

/// Classifies a series sampled on a checkpoint grid.
DivergenceEstimate classify_on_grid(std::string name, const CheckpointGrid& grid,
                                    const std::vector<double>& values, const DivergenceOpts& opts);

}  // namespace hamosc::criteria
