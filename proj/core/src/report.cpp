#include "hamosc/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace hamosc::report {

using nlohmann::json;

const char* version() { return HAMOSC_VERSION; }

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json header(const Meta& meta) {
  return json{{"tool", "hamosc"}, {"version", version()}, {"config_hash", hex64(meta.config_hash)}};
}

// JSON has no NaN/Inf; those become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const criteria::DivergenceEstimate& e) {
  json cps = json::array();
  for (const auto& c : e.checkpoints) cps.push_back(json{{"T", num(c.t)}, {"value", num(c.value)}});
  return json{{"name", e.name},
              {"checkpoints", std::move(cps)},
              {"monotone_tail", e.monotone_tail},
              {"final_value", num(e.final_value)},
              {"verdict", criteria::to_string(e.verdict)}};
}

json to_json(const criteria::CriterionReport& r) {
  json est = json::array();
  for (const auto& e : r.estimates) est.push_back(to_json(e));
  json cond = json::array();
  for (const auto& c : r.conditions) {
    cond.push_back(json{{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  }
  return json{{"theorem", criteria::theorem_id(r.theorem)},
              {"applicable", r.applicable},
              {"reason", r.reason},
              {"verdict", criteria::to_string(r.verdict)},
              {"status", r.status()},
              {"estimates", std::move(est)},
              {"conditions", std::move(cond)}};
}

json to_json(const ZeroScan& z) {
  json zeros = json::array();
  for (const auto& r : z.zeros) {
    zeros.push_back(json{{"t", num(r.t_zero)},
                         {"sigma_ratio_min", num(r.sigma_ratio_min)},
                         {"kind", r.kind == ZeroRecord::Kind::SignChange ? "sign-change" : "dip"}});
  }
  json near = json::array();
  for (const auto& m : z.near_misses) near.push_back(json{{"t", num(m.t)}, {"sigma_ratio", num(m.sigma_ratio)}});
  return json{{"zeros", std::move(zeros)}, {"near_misses", std::move(near)}};
}

json rescales(const std::vector<RescaleEvent>& log) {
  json out = json::array();
  for (const auto& e : log) out.push_back(json{{"t", num(e.t)}, {"factor", num(e.factor)}});
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string validation_json(const ValidationReport& rep, const Meta& meta) {
  json j = header(meta);
  json issues = json::array();
  for (const auto& i : rep.issues) {
    issues.push_back(json{{"check", i.check}, {"entry", i.entry}, {"t", num(i.t)}, {"detail", i.detail}});
  }
  j["validation"] = json{{"ok", rep.ok()},
                         {"samples", rep.sample_times.size()},
                         {"evaluable", rep.evaluable},
                         {"hermitian_B", rep.hermitian_B},
                         {"hermitian_C", rep.hermitian_C},
                         {"p_positive", rep.p_positive},
                         {"B_positive_definite", rep.B_positive_definite},
                         {"issues", std::move(issues)}};
  return dump(j);
}

std::string criteria_json(const std::vector<criteria::CriterionReport>& reps, const Meta& meta) {
  json j = header(meta);
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(to_json(r));
  j["criteria"] = std::move(arr);
  return dump(j);
}

std::string compare_json(const CompareReport& rep, const Meta& meta) {
  json j = header(meta);
  json arr = json::array();
  for (const auto& r : rep.reports) arr.push_back(to_json(r));
  j["criteria"] = std::move(arr);
  const auto& ic = rep.integration;
  json integ = to_json(ic.zeros);
  integ["completed"] = ic.completed;
  integ["error"] = ic.error;
  integ["t_end"] = num(ic.t_end);
  integ["steps"] = ic.steps;
  integ["max_conjoined_defect"] = num(ic.max_conjoined_defect);
  integ["rescale_events"] = rescales(ic.rescale_log);
  j["integration"] = std::move(integ);
  json dis = json::array();
  for (const auto th : rep.disagreements) dis.push_back(criteria::theorem_id(th));
  j["disagreements"] = std::move(dis);
  return dump(j);
}

std::string integrate_json(const Trajectory& traj, const ZeroScan& zeros, const Meta& meta) {
  json j = header(meta);
  json s = to_json(zeros);
  double max_defect = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) max_defect = std::max(max_defect, traj.unscaled_defect(k));
  s["t_start"] = num(traj.times.front());
  s["t_end"] = num(traj.times.back());
  s["steps"] = traj.size() - 1;
  s["max_conjoined_defect"] = num(max_defect);
  s["rescale_events"] = rescales(traj.rescale_log);
  s["real_valued"] = traj.real_valued;
  j["trajectory"] = std::move(s);
  return dump(j);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,sigma_min_ratio,conjoined_defect,log_abs_det,det_phase_re,det_phase_im\n";
  char buf[160];
  const double n = static_cast<double>(traj.n);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Complex d = det(traj.Phi[k]);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(0.0, 0.0);
    const double lad = log_abs_det(traj.Phi[k]) - n * std::log(traj.scale[k]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[k],
                  traj.sigma_min_ratio[k], traj.unscaled_defect(k), lad, phase.real(), phase.imag());
    out += buf;
  }
  return out;
}

std::string validation_text(const ValidationReport& rep) {
  std::ostringstream os;
  os << (rep.ok() ? "valid" : "INVALID") << " (" << rep.sample_times.size() << " samples)\n";
  os << "  evaluable: " << (rep.evaluable ? "yes" : "no") << "\n";
  os << "  B Hermitian: " << (rep.hermitian_B ? "yes" : "no") << "\n";
  os << "  C Hermitian: " << (rep.hermitian_C ? "yes" : "no") << "\n";
  os << "  p > 0: " << (rep.p_positive ? "yes" : "no") << "\n";
  os << "  B > 0: " << (rep.B_positive_definite ? "yes" : "no") << "\n";
  for (const auto& i : rep.issues) {
    os << "  issue [" << i.check << "] " << i.entry << " at t=" << i.t << ": " << i.detail << "\n";
  }
  return os.str();
}

std::string criteria_text(const std::vector<criteria::CriterionReport>& reps) {
  std::ostringstream os;
  for (const auto& r : reps) {
    os << criteria::theorem_id(r.theorem) << "  " << r.status();
    if (!r.reason.empty()) os << "  (" << r.reason << ")";
    os << "\n";
    for (const auto& e : r.estimates) {
      os << "    " << e.name << ": " << criteria::to_string(e.verdict) << ", final " << e.final_value
         << ", tail " << e.monotone_tail << "\n";
    }
  }
  return os.str();
}

}  // namespace hamosc::report
