#include <doctest.h>

#include "qmetro/error.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/random.hpp"
#include "qmetro/scenarios.hpp"
#include "qmetro/tensor_bounds.hpp"

using namespace qmetro;

namespace {
Analysis preset(const char* id, double delta) {
  StateFamily fam = build_scenario(ScenarioSpec::parse(id, delta));
  return analyze(evaluate(fam, RVector::Zero(static_cast<Eigen::Index>(fam.n()))));
}
}  // namespace

TEST_CASE("site-sum C_p matches dense products") {
  Rng rng(7);
  for (int p : {1, 2, 3}) {
    Analysis a = analyze(make_state(random_density(3, rng), {random_traceless_hermitian(3, rng),
                                                             random_traceless_hermitian(3, rng),
                                                             random_traceless_hermitian(3, rng)}));
    auto coll = build_collective(a.state, a.fisher.tilde_ops, p);
    TradeoffMatrix c = compute_Cp(coll), cd = compute_Cp_dense(coll);
    CHECK((c.entries - cd.entries).norm() < 1e-9);
    CHECK((c.entries - c.entries.transpose()).norm() == 0.0);
    CHECK(c.entries.diagonal().norm() == 0.0);
  }
}

TEST_CASE("qutrit C_p matches the closed form at delta = 0") {
  Analysis a = preset("qutrit8", 0.0);
  for (int p : {1, 2, 3}) {
    TradeoffMatrix c = compute_Cp(build_collective(a.state, a.fisher.tilde_ops, p));
    TradeoffMatrix want = qutrit_Cp_closed(ScenarioSpec::parse("qutrit8"), p);
    CHECK((c.entries - want.entries).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("T_p exact against closed form and Monte Carlo") {
  for (double d : {0.0, 0.4}) {
    Analysis a = preset("qubit3", d);
    for (int p : {1, 2, 5}) {
      TradeoffMatrix t = compute_Tp_exact(a.state, a.fisher.tilde_ops, p);
      CHECK(t.entries(0, 1) == doctest::Approx(qubit_Tp12_closed(d, p)).epsilon(1e-10));
    }
  }
  Analysis a = preset("qutrit:1,2,5", 0.2);
  TradeoffMatrix ex = compute_Tp_exact(a.state, a.fisher.tilde_ops, 4);
  TradeoffMatrix mc = compute_Tp_monte_carlo(a.state, a.fisher.tilde_ops, 4, 40000, 3);
  for (Eigen::Index j = 0; j < 3; ++j)
    for (Eigen::Index k = 0; k < 3; ++k)
      CHECK(std::abs(ex.entries(j, k) - mc.entries(j, k)) <= 5.0 * mc.std_error(j, k) + 1e-12);
  TradeoffMatrix mc2 = compute_Tp_monte_carlo(a.state, a.fisher.tilde_ops, 4, 40000, 3);
  CHECK((mc.entries - mc2.entries).norm() == 0.0);
}

TEST_CASE("enumeration cap") {
  Analysis a = preset("qutrit8", 0.0);
  CHECK(composition_count(3, 3) == 10.0);
  Limits lim;
  lim.max_enumeration = 5;
  try {
    compute_Tp_exact(a.state, a.fisher.tilde_ops, 3, lim);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EnumerationOverflow);
  }
  Limits small;
  small.max_dim = 20;
  CHECK_THROWS_AS(build_collective(a.state, a.fisher.tilde_ops, 3, DerivativeKind::SLD, true, small), Error);
}

TEST_CASE("RLD C_p clips at 2p") {
  auto s = pauli();
  for (double eps : {0.25, 0.1}) {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1 - eps;
    rho(1, 1) = eps;
    EvaluatedState st = make_state(rho, {0.5 * s[0], 0.5 * s[1]});
    Analysis a = analyze(st);
    DerivativeSet r = compute_rld(st);
    FisherData f = a.fisher;
    compute_rld_fisher(st, r, f);
    auto t = reparametrize(r, f);
    CMatrix sr = sqrt_psd(rho);
    CMatrix M = sr * (t[0] * t[1].adjoint() - t[1] * t[0].adjoint()) * sr;
    Eigen::JacobiSVD<CMatrix> svd(M);
    const double raw = 0.5 * svd.singularValues().sum();
    TradeoffMatrix c = compute_Cp_rld(build_collective(st, t, 1, DerivativeKind::RLD, true));
    CHECK(c.entries(0, 1) == doctest::Approx(std::min(raw, 2.0)).epsilon(1e-12));
    if (eps == 0.1) {
      CHECK(raw > 2.0);
      CHECK(c.entries(0, 1) == 2.0);
    }
  }
  Analysis a = preset("qubit3", 0.0);
  CHECK_THROWS_AS(compute_Cp_rld(build_collective(a.state, a.fisher.tilde_ops, 1)), Error);
}

TEST_CASE("F-bar signs, bases and limits") {
  Analysis a = preset("qubit3", 0.5);
  auto coll = build_collective(a.state, a.fisher.tilde_ops, 2);
  const RMatrix I = RMatrix::Identity(3, 3);
  FbarSearch fs = optimize_Fbar_im(coll, UBasis::computational(4), I);
  CHECK(fs.exhaustive);
  TradeoffMatrix asis = compute_Fbar_im(coll, UBasis::computational(4), SignChoice(4, Orientation::AsIs));
  CHECK(fs.fbar.entries.norm() >= asis.entries.norm() - 1e-12);
  // C_p dominates every F-bar entry
  TradeoffMatrix c = compute_Cp(coll);
  TradeoffMatrix best = best_Fbar_im(coll, I);
  CHECK(((c.entries - best.entries).array() >= -1e-9).all());
  UBasis broken;
  broken.vectors = {CVector::Unit(4, 0), CVector::Unit(4, 1)};
  CHECK_THROWS_AS(compute_Fbar_im(coll, broken, SignChoice(2, Orientation::AsIs)), Error);
  TradeoffMatrix lim = limit_Fim(a.state, a.fisher.tilde_ops);
  CHECK(lim.entries(0, 1) == doctest::Approx(0.5));
  CHECK(lim.entries(0, 2) == doctest::Approx(0.0));
}
