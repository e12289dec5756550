#include "hamosc/compare.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>

#include "hamosc/errors.hpp"

namespace hamosc {

unsigned thread_cap() {
  if (const char* env = std::getenv("HAMOSC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

IntegrationCheck integration_check(const SystemSpec& spec, double t_end, const CompareOpts& opts) {
  IntegrationCheck out;
  const Eigen::Index n = spec.n;
  const CMatrix phi0 = opts.phi0.value_or(CMatrix::Identity(n, n));
  const CMatrix psi0 = opts.psi0.value_or(CMatrix::Zero(n, n));
  try {
    const auto traj = integrate_system(spec, phi0, psi0, t_end, opts.integrator);
    out.completed = true;
    out.t_end = traj.times.back();
    out.steps = traj.size() - 1;
    out.zeros = scan_det_zeros(traj, opts.zeta);
    out.rescale_log = traj.rescale_log;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      out.max_conjoined_defect = std::max(out.max_conjoined_defect, traj.unscaled_defect(k));
    }
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

CompareReport compare_all(const SystemSpec& spec, const CompareOpts& opts) {
  CompareReport rep;
  constexpr std::size_t kCriteria = std::size(criteria::kAllTheorems);
  rep.reports.resize(kCriteria);
  double t_end = opts.criteria.divergence.t_max;
  if (!(t_end > spec.t0)) t_end = spec.t0 + 200.0;

  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < kCriteria; ++i) {
    tasks.emplace_back([&, i] {
      try {
        rep.reports[i] = criteria::evaluate(criteria::kAllTheorems[i], spec, opts.criteria);
      } catch (const std::exception& e) {
        rep.reports[i] = criteria::CriterionReport{};
        rep.reports[i].theorem = criteria::kAllTheorems[i];
        rep.reports[i].reason = e.what();
      }
    });
  }
  tasks.emplace_back([&] {
    try {
      rep.integration = integration_check(spec, t_end, opts);
    } catch (const std::exception& e) {
      rep.integration = IntegrationCheck{};
      rep.integration.error = e.what();
    }
  });

  unsigned workers = opts.threads ? opts.threads : thread_cap();
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  if (workers <= 1) {
    for (auto& task : tasks) task();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& r : rep.reports) {
    if (r.verdict == criteria::Verdict::OscillatoryEvidence && rep.integration.zeros.zeros.size() < 2) {
      rep.disagreements.push_back(r.theorem);
    }
  }
  return rep;
}

}  // namespace hamosc
