#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hamosc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad arguments or unreadable/unwritable files
  kValidation = 2,  // config parsed but the system fails validation
  kParse = 3,       // malformed JSON, schema violation or bad expression
  kIntegration = 4, // the integrator failed
};

/// Output target: "-" means the command's stdout stream.
using OutPath = std::optional<std::string>;

int cmd_validate(const std::string& config_path, const OutPath& json_out, std::ostream& out,
                 std::ostream& err);
int cmd_integrate(const std::string& config_path, std::optional<double> T, const OutPath& csv_out,
                  const OutPath& json_out, std::ostream& out, std::ostream& err);
int cmd_criteria(const std::string& config_path, const std::string& theorem,
                 const OutPath& json_out, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config_path, const OutPath& json_out, std::ostream& out,
                std::ostream& err);

/// Same three commands on an in-memory document (used by `run` and by tests).
int validate_text(const std::string& config_text, const OutPath& json_out, std::ostream& out,
                  std::ostream& err);

/// Full command line without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamosc::cli
