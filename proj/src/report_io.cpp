#include "qmetro/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "qmetro/error.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/scenarios.hpp"
#include "qmetro/state.hpp"
#include "qmetro/variational.hpp"

namespace qmetro {

namespace {

const std::set<std::string> kKnownBounds{"cp", "tp", "tp_mc", "fbar", "rld", "rld_cp",
                                         "pure", "lower", "refs", "variational"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

bool is_config_error(ErrorCode c) {
  return c == ErrorCode::InvalidSpec || c == ErrorCode::InvalidArgument || c == ErrorCode::OutOfRange ||
         c == ErrorCode::InvalidWeight;
}

void report_error(const RunConfig& cfg, std::ostream& err, const std::string& code, const std::string& msg,
                  int exit_code) {
  if (cfg.error_json) {
    nlohmann::json j{{"error", code}, {"message", msg}, {"exit_code", exit_code}};
    err << j.dump() << "\n";
  } else {
    err << "error: " << msg << "\n";
  }
}

template <class Fn>
int guarded_run(const RunConfig& cfg, std::ostream& err, Fn&& fn) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    report_error(cfg, err, std::string(to_string(e.code())), e.what(), 1);
    return 1;
  }
  try {
    fn();
  } catch (const Error& e) {
    const int code = is_config_error(e.code()) ? 1 : 2;
    report_error(cfg, err, std::string(to_string(e.code())), e.what(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(cfg, err, "InvalidInput", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    report_error(cfg, err, "Internal", e.what(), 2);
    return 2;
  }
  return 0;
}

struct Source {
  StateFamily family;
  RVector x0;
  std::string name;
  bool preset = false;
};

Source load_source(const RunConfig& cfg, double delta) {
  if (!cfg.preset.empty()) {
    ScenarioSpec spec = ScenarioSpec::parse(cfg.preset, delta);
    StateFamily fam = build_scenario(spec);
    const auto n = static_cast<Eigen::Index>(fam.n());
    return {std::move(fam), RVector::Zero(n), spec.name(), true};
  }
  std::ifstream in(cfg.input_path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open input '" + cfg.input_path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  FamilyDocument doc = family_from_json(j);
  std::string name = cfg.input_path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return {std::move(doc.family), std::move(doc.x0), name, false};
}

std::vector<double> deltas_of(const RunConfig& cfg) {
  if (cfg.delta_sweep) return cfg.delta_sweep->points();
  return {cfg.delta};
}

ReportOptions report_options(const RunConfig& cfg, bool with_lower) {
  ReportOptions o;
  o.bounds.clear();
  for (const auto& b : cfg.bounds)
    if (b != "variational") o.bounds.insert(b);
  if (with_lower) o.bounds.insert("lower");
  o.mc_samples = cfg.mc_samples;
  o.seed = cfg.seed;
  o.limits = cfg.limits;
  o.fbar_branch = cfg.fbar_branch;
  o.explicit_selection = true;
  return o;
}

std::string kind_tag(BoundKind k) {
  switch (k) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::Reference: return "reference";
  }
  return "upper";
}

// All rows for one delta; the analysis is shared by every p.
std::vector<Row> rows_for_delta(const RunConfig& cfg, double delta, bool sweep_lines) {
  Source src = load_source(cfg, delta);
  const double delta_col = src.preset ? delta : std::numeric_limits<double>::quiet_NaN();
  Analysis a = analyze(evaluate(src.family, src.x0));
  const bool want_var = std::find(cfg.bounds.begin(), cfg.bounds.end(), "variational") != cfg.bounds.end();
  const bool want_lower = std::find(cfg.bounds.begin(), cfg.bounds.end(), "lower") != cfg.bounds.end();

  std::optional<MinimizeResult> var;
  if (want_var) {
    MinimizeConfig mc;
    mc.W = a.fisher.F_Q;
    mc.seed = cfg.seed;
    var = minimize_bound(a.state, a.slds, a.fisher, mc);
  }

  std::vector<Row> rows;
  for (int p : cfg.p_list) {
    BoundReport rep = build_report(a, p, report_options(cfg, false));
    for (const auto& e : rep.entries)
      rows.push_back({src.name, delta_col, p, e.name, e.value, e.tightest, kind_tag(e.kind) + "; " + e.method});
    if (var)
      rows.push_back({src.name, delta_col, p, "variational", var->value, false,
                      std::string("reference; Holevo functional, lower bound on Tr[F_Q Cov], W=F_Q, iterations=") +
                          std::to_string(var->iterations) + (var->converged ? ", converged" : ", not converged")});
    if (sweep_lines) {
      if (rep.saturation.weak_commutative) {
        rows.push_back({src.name, delta_col, p, "qcrb_reference", static_cast<double>(rep.n), false,
                        "reference; weak commutative, QCRB/Holevo line"});
      } else if (!want_lower) {
        rows.push_back({src.name, delta_col, p, "gamma_inf_lower", gamma_inf_lower(a.fisher, rep.n), false,
                        "reference; lower bound on Gamma_inf (p -> infinity)"});
        rows.push_back({src.name, delta_col, p, "gamma_inf_upper", gamma_inf_upper(a.fisher, rep.n), false,
                        "reference; upper bound on Gamma_inf (p -> infinity)"});
      }
    }
  }
  return rows;
}

}  // namespace

void sort_rows(std::vector<Row>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const bool an = std::isnan(a.delta), bn = std::isnan(b.delta);
    if (an != bn) return bn;
    if (!an && a.delta != b.delta) return a.delta < b.delta;
    if (a.p != b.p) return a.p < b.p;
    return a.bound_name < b.bound_name;
  });
}

std::string format_value(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_csv(const std::vector<Row>& rows) {
  std::string out = "scenario,delta,p,bound_name,value,tightest,meta\n";
  for (const auto& r : rows) {
    out += csv_field(r.scenario) + "," + format_value(r.delta) + "," + std::to_string(r.p) + "," +
           csv_field(r.bound_name) + "," + format_value(r.value) + "," + (r.tightest ? "true" : "false") + "," +
           csv_field(r.meta) + "\n";
  }
  return out;
}

nlohmann::json to_json(const std::vector<Row>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o;
    o["scenario"] = r.scenario;
    o["delta"] = std::isnan(r.delta) ? nlohmann::json(nullptr) : nlohmann::json(r.delta);
    o["p"] = r.p;
    o["bound_name"] = r.bound_name;
    o["value"] = r.value;
    o["tightest"] = r.tightest;
    o["meta"] = r.meta;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::vector<double> SweepRange::points() const {
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) v.push_back(start + (stop - start) * i / (steps - 1));
  return v;
}

void RunConfig::validate() const {
  if (preset.empty() == input_path.empty())
    throw Error(ErrorCode::InvalidArgument, "exactly one of --preset or --input is required");
  if (p_list.empty()) throw Error(ErrorCode::InvalidArgument, "p list is empty");
  for (int p : p_list)
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "each p must be >= 1");
  if (delta_sweep && delta_sweep->steps < 2) throw Error(ErrorCode::InvalidArgument, "sweep steps must be >= 2");
  if (!std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "delta must be finite");
  if (bounds.empty()) throw Error(ErrorCode::InvalidArgument, "no bounds selected");
  for (const auto& b : bounds)
    if (!kKnownBounds.count(b)) throw Error(ErrorCode::InvalidArgument, "unknown bound '" + b + "'");
  if (format != "csv" && format != "json") throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  if (limits.max_dim < 1 || limits.max_enumeration < 1) throw Error(ErrorCode::InvalidArgument, "caps must be >= 1");
  if (mc_samples < 2) throw Error(ErrorCode::InvalidArgument, "mc_samples must be >= 2");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw Error(ErrorCode::InvalidArgument, "bad integer '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

FBranch parse_branch(const std::string& s) {
  if (s == "max") return FBranch::Max;
  if (s == "pairwise") return FBranch::Pairwise;
  if (s == "correlated") return FBranch::Correlated;
  if (s == "large-n") return FBranch::LargeN;
  throw Error(ErrorCode::InvalidArgument, "unknown f(n) branch '" + s + "'");
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  if (j.contains("preset")) cfg.preset = j["preset"].get<std::string>();
  if (j.contains("input")) cfg.input_path = j["input"].get<std::string>();
  if (j.contains("p")) {
    const auto& p = j["p"];
    cfg.p_list = p.is_array() ? p.get<std::vector<int>>() : std::vector<int>{p.get<int>()};
  }
  if (j.contains("delta")) {
    const auto& d = j["delta"];
    if (d.is_object())
      cfg.delta_sweep = SweepRange{d.at("start").get<double>(), d.at("stop").get<double>(), d.at("steps").get<int>()};
    else
      cfg.delta = d.get<double>();
  }
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    cfg.bounds = b.is_array() ? b.get<std::vector<std::string>>() : parse_name_list(b.get<std::string>());
  }
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("mc_samples")) cfg.mc_samples = j["mc_samples"].get<std::size_t>();
  if (j.contains("max_dim")) cfg.limits.max_dim = j["max_dim"].get<std::size_t>();
  if (j.contains("max_enumeration")) cfg.limits.max_enumeration = j["max_enumeration"].get<std::size_t>();
  if (j.contains("fbar_branch")) cfg.fbar_branch = parse_branch(j["fbar_branch"].get<std::string>());
}

std::vector<Row> run_bounds(const RunConfig& cfg) {
  cfg.validate();
  std::vector<Row> rows;
  for (double d : deltas_of(cfg)) {
    auto r = rows_for_delta(cfg, d, false);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  sort_rows(rows);
  return rows;
}

std::vector<Row> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.delta_sweep && cfg.p_list.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "sweep needs a delta range or at least two p values");
  std::vector<std::future<std::vector<Row>>> jobs;
  for (double d : deltas_of(cfg)) {
    for (int p : cfg.p_list) {
      RunConfig one = cfg;
      one.delta_sweep.reset();
      one.delta = d;
      one.p_list = {p};
      jobs.push_back(std::async(std::launch::async, [one, d] { return rows_for_delta(one, d, true); }));
    }
  }
  std::vector<Row> rows;
  for (auto& f : jobs) {
    auto r = f.get();
    rows.insert(rows.end(), r.begin(), r.end());
  }
  sort_rows(rows);
  return rows;
}

void write_rows(const RunConfig& cfg, const std::vector<Row>& rows, std::ostream& out) {
  const std::string text = cfg.format == "json" ? to_json(rows).dump(2) + "\n" : to_csv(rows);
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.output + "'");
  f << text;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded_run(cfg, err, [&] { write_rows(cfg, run_bounds(cfg), out); });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded_run(cfg, err, [&] { write_rows(cfg, run_sweep(cfg), out); });
}

int cmd_export(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded_run(cfg, err, [&] {
    Source src = load_source(cfg, cfg.delta);
    const std::string text = family_to_json(src.family, src.x0).dump(2) + "\n";
    if (cfg.output.empty() || cfg.output == "-") {
      out << text;
      return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.output + "'");
    f << text;
  });
}

}  // namespace qmetro
