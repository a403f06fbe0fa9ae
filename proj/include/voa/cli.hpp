#ifndef VOA_CLI_HPP
#define VOA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "voa/models.hpp"
#include "voa/parallel.hpp"
#include "voa/report.hpp"

namespace voa {

// Exit codes: 0 pass, 1 check failure, 2 config error, 3 truncation exhaustion.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTruncation = 3;

struct RunConfig {
  ModelDescriptor model;
  std::vector<std::string> suites;  // empty = all registered suites
  double tolerance = 1e-10;
  std::vector<int> cutoffs = {16, 32, 64};
  std::string out_dir = ".";
  bool write_json = true;
  bool write_csv = true;
  bool include_timings = false;  // timings make reports non-reproducible; opt-in
  ExecMode exec = ExecMode::parallel;
};

// The fixed registry of verify suites, in execution order.
const std::vector<std::string>& verify_suite_registry();

// Parses a JSON config document (the same shape cmd_* would echo).
// Throws ConfigError with a field-naming diagnostic.
RunConfig parse_config_text(const std::string& json_text);

// Subcommands. Each writes machine-readable artifacts under out_dir and a
// human summary to `out`; diagnostics go to `err`. Returns an exit code.
int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_smear(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace voa

#endif  // VOA_CLI_HPP
