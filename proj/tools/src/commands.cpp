#include "hamosc_cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hamosc/baseline.hpp"
#include "hamosc/config.hpp"
#include "hamosc/errors.hpp"
#include "hamosc/report.hpp"

namespace hamosc::cli {

namespace {

// Result of loading a config: either a parsed document or the exit code to return.
struct Loaded {
  std::optional<Config> cfg;
  int code = kOk;
};

Loaded parse_reporting(const std::string& text, std::ostream& err) {
  Loaded l;
  try {
    l.cfg = parse_config(text);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (byte offset " << e.offset() << ")\n";
    l.code = kParse;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    l.code = kParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    l.code = kParse;
  }
  return l;
}

Loaded load_reporting(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    return {std::nullopt, kUsage};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reporting(buf.str(), err);
}

bool to_stdout(const OutPath& target) { return target && *target == "-"; }

// Human-readable text moves to stderr whenever stdout carries a machine-readable report.
std::ostream& text_stream(std::ostream& out, std::ostream& err, const OutPath& a,
                          const OutPath& b = std::nullopt) {
  return (to_stdout(a) || to_stdout(b)) ? err : out;
}

bool write_out(const OutPath& target, const std::string& content, std::ostream& out,
               std::ostream& err) {
  if (!target) return true;
  if (*target == "-") {
    out << content;
    return true;
  }
  std::ofstream f(*target, std::ios::binary);
  f << content;
  f.flush();
  if (!f) {
    err << "error: cannot write " << *target << "\n";
    return false;
  }
  return true;
}

// Validation step shared by every command; returns kOk or kValidation.
int check_valid(const Config& cfg, const OutPath& json_out, bool print, std::ostream& out,
                std::ostream& err, int* io_code = nullptr) {
  const auto rep = validate(cfg.spec);
  if (print) text_stream(out, err, json_out) << report::validation_text(rep);
  if (json_out && !write_out(json_out, report::validation_json(rep, {cfg.hash}), out, err)) {
    if (io_code) *io_code = kUsage;
  }
  if (!rep.ok()) {
    if (!print) err << report::validation_text(rep);
    return kValidation;
  }
  return kOk;
}

int validate_loaded(const Loaded& l, const OutPath& json_out, std::ostream& out, std::ostream& err) {
  if (!l.cfg) return l.code;
  int io = kOk;
  const int code = check_valid(*l.cfg, json_out, true, out, err, &io);
  return code != kOk ? code : io;
}

}  // namespace

int validate_text(const std::string& config_text, const OutPath& json_out, std::ostream& out,
                  std::ostream& err) {
  return validate_loaded(parse_reporting(config_text, err), json_out, out, err);
}

int cmd_validate(const std::string& config_path, const OutPath& json_out, std::ostream& out,
                 std::ostream& err) {
  return validate_loaded(load_reporting(config_path, err), json_out, out, err);
}

int cmd_integrate(const std::string& config_path, std::optional<double> T, const OutPath& csv_out,
                  const OutPath& json_out, std::ostream& out, std::ostream& err) {
  if (to_stdout(csv_out) && to_stdout(json_out)) {
    err << "error: --csv and --json cannot both write to stdout\n";
    return kUsage;
  }
  const auto l = load_reporting(config_path, err);
  if (!l.cfg) return l.code;
  const Config& cfg = *l.cfg;
  if (const int code = check_valid(cfg, std::nullopt, false, out, err); code != kOk) return code;
  const double t_end = T.value_or(cfg.T);
  if (!(t_end > cfg.spec.t0)) {
    err << "error: --T must exceed t0\n";
    return kUsage;
  }
  const Eigen::Index n = cfg.spec.n;
  Trajectory traj;
  ZeroScan zeros;
  try {
    traj = integrate_system(cfg.spec, cfg.compare.phi0.value_or(CMatrix::Identity(n, n)),
                            cfg.compare.psi0.value_or(CMatrix::Zero(n, n)), t_end,
                            cfg.compare.integrator);
    zeros = scan_det_zeros(traj, cfg.compare.zeta);
  } catch (const Error& e) {
    err << "integration failed: " << e.what() << "\n";
    return kIntegration;
  }
  std::ostream& txt = text_stream(out, err, csv_out, json_out);
  txt << "integrated [" << traj.times.front() << ", " << traj.times.back() << "] in "
      << traj.size() - 1 << " steps, " << traj.rescale_log.size() << " rescales\n";
  txt << zeros.zeros.size() << " zeros of det Phi";
  if (!zeros.zeros.empty()) {
    txt << ":";
    for (const auto& z : zeros.zeros) txt << " " << z.t_zero;
  }
  txt << "\n";
  if (!zeros.near_misses.empty()) txt << zeros.near_misses.size() << " near misses\n";
  if (!write_out(csv_out, report::trajectory_csv(traj), out, err)) return kUsage;
  if (!write_out(json_out, report::integrate_json(traj, zeros, {cfg.hash}), out, err)) return kUsage;
  return kOk;
}

int cmd_criteria(const std::string& config_path, const std::string& theorem,
                 const OutPath& json_out, std::ostream& out, std::ostream& err) {
  std::vector<criteria::Theorem> which;
  if (theorem == "all") {
    which.assign(std::begin(criteria::kAllTheorems), std::end(criteria::kAllTheorems));
  } else if (const auto th = criteria::parse_theorem(theorem)) {
    which.push_back(*th);
  } else {
    err << "error: unknown theorem '" << theorem << "' (all, 1.1, 2.1, 3.1, 3.2, 3.3)\n";
    return kUsage;
  }
  const auto l = load_reporting(config_path, err);
  if (!l.cfg) return l.code;
  const Config& cfg = *l.cfg;
  if (const int code = check_valid(cfg, std::nullopt, false, out, err); code != kOk) return code;
  std::vector<criteria::CriterionReport> reps;
  for (const auto th : which) reps.push_back(criteria::evaluate(th, cfg.spec, cfg.compare.criteria));
  text_stream(out, err, json_out) << report::criteria_text(reps);
  if (!write_out(json_out, report::criteria_json(reps, {cfg.hash}), out, err)) return kUsage;
  return kOk;
}

int cmd_compare(const std::string& config_path, const OutPath& json_out, std::ostream& out,
                std::ostream& err) {
  const auto l = load_reporting(config_path, err);
  if (!l.cfg) return l.code;
  const Config& cfg = *l.cfg;
  if (const int code = check_valid(cfg, std::nullopt, false, out, err); code != kOk) return code;
  const auto rep = compare_all(cfg.spec, cfg.compare);
  std::ostream& txt = text_stream(out, err, json_out);
  txt << report::criteria_text(rep.reports);
  const auto& ic = rep.integration;
  if (ic.completed) {
    txt << "integration to t=" << ic.t_end << ": " << ic.zeros.zeros.size()
        << " zeros, max conjoined defect " << ic.max_conjoined_defect << "\n";
  } else {
    txt << "integration failed: " << ic.error << "\n";
  }
  for (const auto th : rep.disagreements) {
    txt << "DISAGREEMENT: " << criteria::theorem_id(th)
        << " reports oscillatory evidence but fewer than 2 zeros were found\n";
  }
  if (!write_out(json_out, report::compare_json(rep, {cfg.hash}), out, err)) return kUsage;
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oscillation criteria and direct integration for extended matrix Hamiltonian systems", "hamosc"};
  app.set_version_flag("--version", std::string(report::version()));
  app.require_subcommand(1);

  std::string path;
  OutPath json_out;
  OutPath csv_out;
  std::optional<double> T;
  std::string theorem = "all";

  auto* v = app.add_subcommand("validate", "check a config document");
  v->add_option("config", path, "config file")->required();
  v->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");

  auto* in = app.add_subcommand("integrate", "integrate the system and locate zeros of det Phi");
  in->add_option("config", path, "config file")->required();
  in->add_option("--T", T, "end time (default: integrator.T)");
  in->add_option("--csv", csv_out, "write the trajectory CSV here ('-' for stdout)");
  in->add_option("--json", json_out, "write the JSON summary here ('-' for stdout)");

  auto* cr = app.add_subcommand("criteria", "evaluate oscillation criteria");
  cr->add_option("config", path, "config file")->required();
  cr->add_option("--theorem", theorem, "all, 1.1, 2.1, 3.1, 3.2 or 3.3");
  cr->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");

  auto* cm = app.add_subcommand("compare", "all criteria plus an integration cross-check");
  cm->add_option("config", path, "config file")->required();
  cm->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << report::version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (*v) return cmd_validate(path, json_out, out, err);
    if (*in) return cmd_integrate(path, T, csv_out, json_out, out, err);
    if (*cr) return cmd_criteria(path, theorem, json_out, out, err);
    if (*cm) return cmd_compare(path, json_out, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace hamosc::cli
