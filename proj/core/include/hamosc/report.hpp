#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamosc/coeffs.hpp"
#include "hamosc/compare.hpp"
#include "hamosc/criteria.hpp"
#include "hamosc/integrate.hpp"

namespace hamosc::report {

/// Library version string baked in at build time.
const char* version();

struct Meta {
  std::uint64_t config_hash = 0;
};

/// JSON documents with sorted keys and round-trip precision numbers; byte-identical for
/// identical inputs.
std::string validation_json(const ValidationReport& rep, const Meta& meta);
std::string criteria_json(const std::vector<criteria::CriterionReport>& reps, const Meta& meta);
std::string compare_json(const CompareReport& rep, const Meta& meta);
std::string integrate_json(const Trajectory& traj, const ZeroScan& zeros, const Meta& meta);

/// Header t,sigma_min_ratio,conjoined_defect,log_abs_det,det_phase_re,det_phase_im then one
/// row per stored sample, 17 significant digits. The defect and log|det| are unscaled.
std::string trajectory_csv(const Trajectory& traj);

/// Human-readable one-line-per-item summaries.
std::string validation_text(const ValidationReport& rep);
std::string criteria_text(const std::vector<criteria::CriterionReport>& reps);

}  // namespace hamosc::report
