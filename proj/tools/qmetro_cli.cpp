#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmetro/acceptance.hpp"
#include "qmetro/error.hpp"
#include "qmetro/report_io.hpp"

using namespace qmetro;

namespace {

struct Flags {
  std::string config, preset, input, p, bounds, output, format, branch;
  double delta = 0.0, delta_start = 0.0, delta_stop = 0.0;
  int delta_steps = 0, p_start = 0, p_stop = 0;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 0, max_dim = 0, max_enum = 0;
  bool error_json = false;
};

void add_run_options(CLI::App* cmd, Flags& f, bool sweep) {
  cmd->add_option("--config", f.config, "JSON config file; flags override it");
  cmd->add_option("--preset", f.preset, "qubit3, qutrit8 or qutrit:i,j,...");
  cmd->add_option("--input", f.input, "JSON state family document");
  cmd->add_option("--delta", f.delta, "offset of the preset working point");
  if (sweep) {
    cmd->add_option("--delta-start", f.delta_start);
    cmd->add_option("--delta-stop", f.delta_stop);
    cmd->add_option("--delta-steps", f.delta_steps, "number of delta grid points (>= 2)");
    cmd->add_option("--p-start", f.p_start);
    cmd->add_option("--p-stop", f.p_stop);
  }
  cmd->add_option("--p", f.p, "comma-separated copy counts");
  cmd->add_option("--bounds", f.bounds, "cp,tp,tp_mc,fbar,rld,rld_cp,pure,lower,refs,variational");
  cmd->add_option("--output", f.output, "output file (default stdout)");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--mc-samples", f.mc_samples);
  cmd->add_option("--max-dim", f.max_dim, "cap on d^p (default from QMETRO_MAX_DIM or 16384)");
  cmd->add_option("--max-enumeration", f.max_enum, "cap on exact T_p occupation vectors");
  cmd->add_option("--fbar-branch", f.branch, "f(n) branch: max, pairwise, correlated, large-n");
  cmd->add_flag("--error-json", f.error_json, "print errors as JSON on stderr");
}

RunConfig build_config(CLI::App* cmd, const Flags& f) {
  RunConfig cfg;
  cfg.limits = limits_from_env();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config '" + f.config + "'");
    apply_config_json(cfg, nlohmann::json::parse(in));
  }
  auto given = [&](const char* name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
  if (given("--preset")) {
    cfg.preset = f.preset;
    cfg.input_path.clear();
  }
  if (given("--input")) {
    cfg.input_path = f.input;
    cfg.preset.clear();
  }
  if (given("--delta")) {
    cfg.delta = f.delta;
    cfg.delta_sweep.reset();
  }
  if (given("--delta-steps") || given("--delta-start") || given("--delta-stop")) {
    SweepRange r = cfg.delta_sweep.value_or(SweepRange{});
    if (given("--delta-start")) r.start = f.delta_start;
    if (given("--delta-stop")) r.stop = f.delta_stop;
    if (given("--delta-steps")) r.steps = f.delta_steps;
    cfg.delta_sweep = r;
  }
  if (given("--p")) cfg.p_list = parse_int_list(f.p);
  if (given("--p-start") || given("--p-stop")) {
    if (!given("--p-start") || !given("--p-stop"))
      throw Error(ErrorCode::InvalidArgument, "--p-start and --p-stop go together");
    if (f.p_stop < f.p_start) throw Error(ErrorCode::InvalidArgument, "--p-stop < --p-start");
    cfg.p_list.clear();
    for (int p = f.p_start; p <= f.p_stop; ++p) cfg.p_list.push_back(p);
  }
  if (given("--bounds")) cfg.bounds = parse_name_list(f.bounds);
  if (given("--output")) cfg.output = f.output;
  if (given("--format")) cfg.format = f.format;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--mc-samples")) cfg.mc_samples = f.mc_samples;
  if (given("--max-dim")) cfg.limits.max_dim = f.max_dim;
  if (given("--max-enumeration")) cfg.limits.max_enumeration = f.max_enum;
  if (given("--fbar-branch")) cfg.fbar_branch = parse_branch(f.branch);
  cfg.error_json = f.error_json;
  return cfg;
}

int run_with(CLI::App* cmd, const Flags& f, int (*fn)(const RunConfig&, std::ostream&, std::ostream&)) {
  RunConfig cfg;
  try {
    cfg = build_config(cmd, f);
  } catch (const std::exception& e) {
    if (f.error_json)
      std::cerr << nlohmann::json{{"error", "InvalidArgument"}, {"message", e.what()}, {"exit_code", 1}}.dump()
                << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return fn(cfg, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-parameter quantum estimation bounds"};
  app.require_subcommand(1);

  Flags bf, sf, ef;
  auto* bounds = app.add_subcommand("bounds", "bound report for one working point");
  add_run_options(bounds, bf, false);
  auto* sweep = app.add_subcommand("sweep", "long-format table over a delta or p range");
  add_run_options(sweep, sf, true);
  auto* exp = app.add_subcommand("export-scenario", "write a preset as a JSON state family");
  exp->add_option("--preset", ef.preset)->required();
  exp->add_option("--delta", ef.delta);
  exp->add_option("--output", ef.output);
  exp->add_flag("--error-json", ef.error_json);

  auto* check = app.add_subcommand("check", "run the acceptance criteria");
  std::string only;
  double tol_scale = 1.0;
  check->add_option("--only", only, "paper-values")->check(CLI::IsMember({"paper-values"}));
  check->add_option("--tol-scale", tol_scale, "multiply every tolerance (negative: all checks fail)");

  CLI11_PARSE(app, argc, argv);

  if (*bounds) return run_with(bounds, bf, cmd_bounds);
  if (*sweep) return run_with(sweep, sf, cmd_sweep);
  if (*exp) {
    RunConfig cfg;
    cfg.preset = ef.preset;
    cfg.delta = ef.delta;
    cfg.output = ef.output;
    cfg.error_json = ef.error_json;
    return cmd_export(cfg, std::cout, std::cerr);
  }
  CheckOptions opts;
  opts.only_printed = only == "paper-values";
  opts.tol_scale = tol_scale;
  return run_acceptance(opts, std::cout) == 0 ? 0 : 1;
}
