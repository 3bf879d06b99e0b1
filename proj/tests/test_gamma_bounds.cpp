#include <doctest.h>

#include "qmetro/error.hpp"
#include "qmetro/gamma_bounds.hpp"
#include "qmetro/scenarios.hpp"

using namespace qmetro;

namespace {
Analysis preset(const char* id, double delta) {
  StateFamily fam = build_scenario(ScenarioSpec::parse(id, delta));
  return analyze(evaluate(fam, RVector::Zero(static_cast<Eigen::Index>(fam.n()))));
}
}  // namespace

TEST_CASE("f(n) branches") {
  CHECK(f_of_n(2) == doctest::Approx(0.25));
  CHECK(f_of_n(3) == doctest::Approx(0.25));
  CHECK(f_of_n(4) == doctest::Approx(2.0 / 9.0));
  CHECK(f_of_n(8) == doctest::Approx(0.2));
  CHECK(f_branch(8, FBranch::Correlated) == doctest::Approx(6.0 / 49.0));
  CHECK(f_branch(5, FBranch::Pairwise) == doctest::Approx(1.0 / 16.0));
  CHECK_THROWS_AS(f_of_n(1), Error);
}

TEST_CASE("pure-state bound") {
  auto s = pauli();
  CMatrix psi = CMatrix::Zero(2, 2);
  psi(0, 0) = 1;
  const Complex I(0, 1);
  Analysis a = analyze(make_state(psi, {-0.5 * I * commutator(s[0], psi), -0.5 * I * commutator(s[1], psi)}));
  CHECK(pure_state_bound(a.fisher) == doctest::Approx(1.5));
  CHECK_THROWS_AS(pure_state_bound(preset("qubit3", 0.2).fisher), Error);
}

TEST_CASE("standard RLD bound for the diagonal qubit") {
  auto s = pauli();
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  EvaluatedState st = make_state(rho, {0.5 * s[0], 0.5 * s[1]});
  Analysis a = analyze(st);
  CHECK_THROWS_AS(rld_standard_bound(a.fisher), Error);
  FisherData f = a.fisher;
  compute_rld_fisher(st, compute_rld(st), f);
  CHECK(rld_standard_bound(f) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("report for the qubit preset") {
  Analysis a = preset("qubit3", 0.0);
  BoundReport r = build_report(a, 1);
  REQUIRE(r.find("cp"));
  CHECK(r.find("cp")->value == doctest::Approx(2.25));
  CHECK(r.find("tp")->value == doctest::Approx(2.75));
  CHECK(r.find("fbar")->value == doctest::Approx(2.5));
  CHECK(r.find("cp")->tightest);
  CHECK(r.find("pure") == nullptr);  // mixed state: skipped
  CHECK(r.find("gamma_inf_lower")->kind == BoundKind::Reference);
  CHECK(r.find("gamma_inf_upper")->value == doctest::Approx(3.0));
  CHECK(r.find("gill_massar")->value == doctest::Approx(1.0));
  CHECK(r.find("zhu_hayashi")->value == doctest::Approx(1.5));
  CHECK_FALSE(r.saturation.partial_commutative);
  CHECK(r.saturation.weak_commutative);

  ReportOptions o;
  o.bounds = {"pure"};
  o.explicit_selection = true;
  CHECK_THROWS_AS(build_report(a, 1, o), Error);
}

TEST_CASE("tp auto-switches to Monte Carlo past the cap") {
  Analysis a = preset("qutrit:1,2", 0.1);
  ReportOptions o;
  o.bounds = {"tp"};
  o.limits.max_enumeration = 3;
  o.mc_samples = 2000;
  BoundReport r = build_report(a, 4, o);
  REQUIRE(r.find("tp"));
  CHECK(r.find("tp")->method.find("switched") != std::string::npos);
}

TEST_CASE("kind mismatches and lower/upper ordering") {
  Analysis a = preset("qubit3", 0.5);
  TradeoffMatrix t;
  t.kind = TradeoffKind::T;
  t.entries = RMatrix::Zero(3, 3);
  CHECK_THROWS_AS(cp_bound(t, 3, 1), Error);
  CHECK(gamma_inf_lower(a.fisher, 3) <= gamma_inf_upper(a.fisher, 3));
}

TEST_CASE("Cauchy-Schwarz transforms") {
  Analysis a = preset("qubit3", 0.0);
  const RMatrix W = RMatrix::Identity(3, 3);
  CsTransforms cs = cs_transforms(3.0, a.fisher, W, 3);
  // Gamma = n means Tr[F_Q Cov] >= n
  CHECK(cs.fisher_weighted == doctest::Approx(3.0));
  RMatrix bad = -W;
  CHECK_THROWS_AS(cs_transforms(3.0, a.fisher, bad, 3), Error);
}
