#pragma once

#include <optional>
#include <vector>

#include "hamosc/criteria.hpp"
#include "hamosc/integrate.hpp"

namespace hamosc {

struct CompareOpts {
  criteria::CriteriaOpts criteria;
  SystemIntegratorOpts integrator;
  std::optional<CMatrix> phi0;  // default I
  std::optional<CMatrix> psi0;  // default 0
  double zeta = kDefaultZeta;
  /// Upper bound on worker threads; 0 reads HAMOSC_THREADS (default: hardware concurrency).
  unsigned threads = 0;
};

struct IntegrationCheck {
  bool completed = false;
  std::string error;  // set when the integration failed
  double t_end = 0.0;
  ZeroScan zeros;
  double max_conjoined_defect = 0.0;  // unscaled
  std::vector<RescaleEvent> rescale_log;
  std::size_t steps = 0;
};

struct CompareReport {
  std::vector<criteria::CriterionReport> reports;  // in kAllTheorems order
  IntegrationCheck integration;
  /// Criteria claiming oscillatory evidence while fewer than two zeros were found.
  std::vector<criteria::Theorem> disagreements;
};

/// Worker cap from HAMOSC_THREADS (positive integer), else hardware concurrency.
unsigned thread_cap();

CompareReport compare_all(const SystemSpec& spec, const CompareOpts& opts = {});

/// Integration cross-check on [t0, t_end].
IntegrationCheck integration_check(const SystemSpec& spec, double t_end, const CompareOpts& opts);

}  // namespace hamosc
