#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qmetro/report_io.hpp"

using namespace qmetro;

TEST_CASE("CSV formatting and ordering") {
  std::vector<Row> rows{{"s", 0.5, 2, "tp", 1.0 / 3.0, false, "a,b"},
                        {"s", 0.0, 1, "tp", 2.75, false, "x"},
                        {"s", 0.0, 1, "cp", 2.25, true, "x"}};
  sort_rows(rows);
  CHECK(rows[0].bound_name == "cp");
  CHECK(rows[2].delta == 0.5);
  const std::string csv = to_csv(rows);
  CHECK(csv.rfind("scenario,delta,p,bound_name,value,tightest,meta\n", 0) == 0);
  CHECK(csv.find("s,0,1,cp,2.25,true,x\n") != std::string::npos);
  CHECK(csv.find("0.333333333333") != std::string::npos);
  CHECK(csv.find("\"a,b\"") != std::string::npos);
  CHECK(to_csv({}) == "scenario,delta,p,bound_name,value,tightest,meta\n");
  auto j = to_json(rows);
  CHECK(j.size() == 3);
  CHECK(j[0]["bound_name"] == "cp");
}

TEST_CASE("config validation and merging") {
  RunConfig cfg;
  cfg.preset = "qubit3";
  CHECK_NOTHROW(cfg.validate());
  cfg.p_list = {0};
  CHECK_THROWS(cfg.validate());
  cfg.p_list = {1};
  cfg.bounds = {"nope"};
  CHECK_THROWS(cfg.validate());
  cfg.bounds = {"cp"};
  cfg.delta_sweep = SweepRange{0, 1, 1};
  CHECK_THROWS(cfg.validate());

  RunConfig c2;
  apply_config_json(c2, nlohmann::json::parse(R"({"preset":"qutrit:1,2,5","p":[1,2],"delta":{"start":0,"stop":0.2,"steps":3},"bounds":"cp,tp"})"));
  CHECK(c2.preset == "qutrit:1,2,5");
  CHECK(c2.p_list == std::vector<int>{1, 2});
  REQUIRE(c2.delta_sweep);
  CHECK(c2.delta_sweep->points().size() == 3);
  CHECK(c2.bounds.size() == 2);
  CHECK(parse_int_list("1,2,10") == std::vector<int>{1, 2, 10});
  CHECK_THROWS(parse_int_list("1,x"));
}

TEST_CASE("bounds and sweep runs") {
  RunConfig cfg;
  cfg.preset = "qutrit:1,2,5";
  cfg.p_list = {2};
  cfg.bounds = {"cp"};
  auto rows = run_bounds(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == doctest::Approx(17.0 / 6.0).epsilon(1e-12));

  RunConfig sw;
  sw.preset = "qubit3";
  sw.bounds = {"cp"};
  sw.p_list = {2};
  sw.delta_sweep = SweepRange{0.0, 0.8, 5};
  auto srows = run_sweep(sw);
  int cps = 0;
  for (const auto& r : srows) {
    if (r.bound_name != "cp") continue;
    ++cps;
    const double d2 = r.delta * r.delta;
    CHECK(r.value == doctest::Approx(45.0 / 16 - d2 / 4 - d2 * d2 / 16).epsilon(1e-10));
  }
  CHECK(cps == 5);
  // delta = 0 is weak commutative: QCRB line present; delta = 0.8 is not
  bool qcrb0 = false, sandwich = false;
  for (const auto& r : srows) {
    if (r.delta == 0.0 && r.bound_name == "qcrb_reference") qcrb0 = r.value == 3.0;
    if (r.delta > 0.7 && r.bound_name == "gamma_inf_upper") sandwich = true;
  }
  CHECK(qcrb0);
  CHECK(sandwich);
}

TEST_CASE("sweeps are reproducible with Monte Carlo") {
  RunConfig sw;
  sw.preset = "qutrit:1,2";
  sw.bounds = {"tp_mc"};
  sw.p_list = {1, 2, 3};
  sw.mc_samples = 500;
  sw.seed = 77;
  CHECK(to_csv(run_sweep(sw)) == to_csv(run_sweep(sw)));
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  RunConfig bad;
  bad.preset = "qubit3";
  bad.delta = 1.5;
  bad.error_json = true;
  CHECK(cmd_bounds(bad, out, err) == 1);
  auto j = nlohmann::json::parse(err.str());
  CHECK(j["exit_code"] == 1);

  // RLD on a pure state is a computation error
  RunConfig pure;
  pure.input_path = "pure_test_family.json";
  {
    nlohmann::json doc{{"dim", 2}, {"n", 2},
                       {"rho0", {{{1, 0}, {0, 0}}, {{0, 0}, {0, 0}}}},
                       {"generators", {{{{0, 0}, {0.5, 0}}, {{0.5, 0}, {0, 0}}}, {{{0, 0}, {0, -0.5}}, {{0, 0.5}, {0, 0}}}}}};
    std::ofstream("pure_test_family.json") << doc.dump();
  }
  pure.bounds = {"rld"};
  std::ostringstream out2, err2;
  CHECK(cmd_bounds(pure, out2, err2) == 2);
  RunConfig none;
  std::ostringstream out3, err3;
  CHECK(cmd_bounds(none, out3, err3) == 1);
}
