#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmetro/gamma_bounds.hpp"
#include "qmetro/tensor_bounds.hpp"

namespace qmetro {

struct Row {
  std::string scenario;
  double delta = 0.0;  // NaN for JSON-file inputs
  int p = 1;
  std::string bound_name;
  double value = 0.0;
  bool tightest = false;
  std::string meta;
};

// delta, then p, then bound_name
void sort_rows(std::vector<Row>& rows);
std::string format_value(double v);  // 12 significant digits
std::string to_csv(const std::vector<Row>& rows);
nlohmann::json to_json(const std::vector<Row>& rows);

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;
  std::vector<double> points() const;
};

struct RunConfig {
  std::string preset;      // scenario id, or
  std::string input_path;  // JSON family document
  std::vector<int> p_list{1};
  double delta = 0.0;
  std::optional<SweepRange> delta_sweep;
  std::vector<std::string> bounds{"cp", "tp", "fbar"};
  std::string output;  // empty: stdout
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t mc_samples = 100000;
  Limits limits;
  FBranch fbar_branch = FBranch::Max;
  bool error_json = false;

  // Throws Error(InvalidArgument) on bad config.
  void validate() const;
};

// Keys: input, preset, p (int or list), delta (number or {start, stop, steps}), bounds, output,
// format, seed, mc_samples, max_dim, max_enumeration, fbar_branch.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
std::vector<int> parse_int_list(const std::string& s);
std::vector<std::string> parse_name_list(const std::string& s);
FBranch parse_branch(const std::string& s);

// One row per (delta, p, bound).
std::vector<Row> run_bounds(const RunConfig& cfg);
// Like run_bounds, plus the QCRB reference line n when weak-commutative, else the
// gamma_inf sandwich; grid points run in parallel.
std::vector<Row> run_sweep(const RunConfig& cfg);

// Write rows to cfg.output (or out) in cfg.format.
void write_rows(const RunConfig& cfg, const std::vector<Row>& rows, std::ostream& out);

// Exit codes: 0 ok, 1 bad config, 2 computation error.
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_export(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qmetro
