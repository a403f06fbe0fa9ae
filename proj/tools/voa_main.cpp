// Command-line front end: build the example algebras, run the verification
// suites, and run the smearing experiments.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "voa/cli.hpp"
#include "voa/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string model;
  int depth = -1;
  std::string central_charge;
  std::vector<std::string> suites;
  std::vector<int> cutoffs;
  double tolerance = -1.0;
  std::string out_dir;
  bool json = false;
  bool csv = false;
  bool no_json = false;
  bool no_csv = false;
  bool timings = false;
  std::string exec;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (flags override it)");
  cmd->add_option("--model", o.model, "heisenberg | virasoro");
  cmd->add_option("--depth", o.depth, "truncation depth D");
  cmd->add_option("--c", o.central_charge, "central charge as a rational, e.g. 1/2");
  cmd->add_option("--suite", o.suites, "suite to run (repeatable)");
  cmd->add_option("--cutoffs", o.cutoffs, "Fourier cutoffs for smearing experiments")
      ->delimiter(',');
  cmd->add_option("--tolerance", o.tolerance, "numeric tolerance for float identities");
  cmd->add_option("--out-dir", o.out_dir, "output directory for reports");
  cmd->add_flag("--json", o.json, "write JSON reports (default on)");
  cmd->add_flag("--csv", o.csv, "write CSV tables (default on)");
  cmd->add_flag("--no-json", o.no_json, "suppress JSON reports");
  cmd->add_flag("--no-csv", o.no_csv, "suppress CSV tables");
  cmd->add_flag("--timings", o.timings, "embed wall-clock timings in reports");
  cmd->add_option("--exec", o.exec, "serial | parallel (default parallel)");
}

int build_config(const CommonOpts& o, voa::RunConfig& cfg, std::ostream& err) {
  try {
    if (!o.config_path.empty()) {
      std::ifstream in(o.config_path, std::ios::binary);
      if (!in) throw voa::ConfigError("cannot open config file: " + o.config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = voa::parse_config_text(ss.str());
    }
    if (!o.model.empty()) cfg.model.kind = o.model;
    if (o.depth >= 0) cfg.model.depth = o.depth;
    if (!o.central_charge.empty())
      cfg.model.central_charge = voa::parse_rational(o.central_charge);
    if (!o.suites.empty()) {
      for (const auto& s : o.suites) {
        const auto& reg = voa::verify_suite_registry();
        if (std::find(reg.begin(), reg.end(), s) == reg.end())
          throw voa::ConfigError("unknown suite: " + s);
      }
      cfg.suites = o.suites;
    }
    if (!o.cutoffs.empty()) cfg.cutoffs = o.cutoffs;
    if (o.tolerance > 0) cfg.tolerance = o.tolerance;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.no_json) cfg.write_json = false;
    if (o.json) cfg.write_json = true;
    if (o.no_csv) cfg.write_csv = false;
    if (o.csv) cfg.write_csv = true;
    cfg.include_timings = o.timings;
    if (!o.exec.empty()) cfg.exec = voa::exec_mode_from_name(o.exec);
    if (cfg.model.kind.empty())
      throw voa::ConfigError("no model selected (use --model or --config)");
    if (cfg.model.kind != "heisenberg" && cfg.model.kind != "virasoro")
      throw voa::ConfigError("model must be heisenberg or virasoro");
    return voa::kExitOk;
  } catch (const voa::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return voa::kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return voa::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Moebius vertex algebra engine with a numeric smearing lab"};
  app.require_subcommand(1);

  CommonOpts build_opts, verify_opts, smear_opts;
  CLI::App* build = app.add_subcommand("build", "build a model and emit its descriptor");
  add_common(build, build_opts);
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, verify_opts);
  CLI::App* smear = app.add_subcommand("smear", "run smeared-field experiments");
  add_common(smear, smear_opts);

  CLI11_PARSE(app, argc, argv);

  voa::RunConfig cfg;
  cfg.model.kind.clear();
  if (build->parsed()) {
    if (int rc = build_config(build_opts, cfg, std::cerr)) return rc;
    return voa::cmd_build(cfg, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    if (int rc = build_config(verify_opts, cfg, std::cerr)) return rc;
    return voa::cmd_verify(cfg, std::cout, std::cerr);
  }
  if (smear->parsed()) {
    if (int rc = build_config(smear_opts, cfg, std::cerr)) return rc;
    return voa::cmd_smear(cfg, std::cout, std::cerr);
  }
  return voa::kExitConfig;
}
