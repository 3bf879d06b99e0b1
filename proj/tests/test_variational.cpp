#include <doctest.h>

#include "qmetro/error.hpp"
#include "qmetro/random.hpp"
#include "qmetro/scenarios.hpp"
#include "qmetro/variational.hpp"

using namespace qmetro;

namespace {
Analysis random_analysis(std::size_t d, std::size_t n, Rng& rng) {
  std::vector<CMatrix> dr;
  for (std::size_t j = 0; j < n; ++j) dr.push_back(random_traceless_hermitian(d, rng));
  return analyze(make_state(random_density(d, rng), dr));
}
}  // namespace

TEST_CASE("canonical and projected sets are locally unbiased") {
  Rng rng(21);
  Analysis a = random_analysis(3, 2, rng);
  LocallyUnbiasedSet X = canonical_unbiased(a.state, a.slds, a.fisher);
  CHECK(X.max_residual() < 1e-10);
  std::vector<CMatrix> raw{random_hermitian(3, rng), random_hermitian(3, rng)};
  LocallyUnbiasedSet P = project_unbiased(raw, a.state);
  CHECK(P.max_residual() < 1e-10);
  // projecting a feasible set leaves it unchanged
  LocallyUnbiasedSet again = project_unbiased(P.X, a.state);
  for (std::size_t j = 0; j < 2; ++j) CHECK((again.X[j] - P.X[j]).norm() < 1e-10);
}

TEST_CASE("degenerate constraints are reported") {
  CMatrix rho = 0.5 * CMatrix::Identity(2, 2);
  auto s = pauli();
  EvaluatedState st = make_state(rho, {s[0], s[0]});
  try {
    project_unbiased({s[0], s[1]}, st);
    FAIL("expected DegenerateConstraints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConstraints);
  }
}

TEST_CASE("measurement observables reproduce the covariance") {
  Rng rng(22);
  Analysis a = random_analysis(3, 2, rng);
  LocalMeasurement m;
  m.elements = random_povm(3, 5, rng);
  std::normal_distribution<double> g;
  for (int i = 0; i < 5; ++i) m.estimates.push_back(RVector::NullaryExpr(2, [&] { return g(rng); }));
  const RVector x0 = RVector::Zero(2);
  LocallyUnbiasedSet X = observables_from_measurement(m, x0, a.state);
  const RMatrix C = covariance(m, x0, a.state);
  // Cov >= Re Z for any estimator
  const UBasis comp = UBasis::computational(3);
  PairMatrices pm = pair_matrices(X, a.slds, a.state, comp, SignChoice(3, Orientation::AsIs));
  CHECK(eigvalsh(CMatrix(C.cast<Complex>() - pm.A_bar)).minCoeff() > -1e-10);
  LocalMeasurement broken = m;
  broken.elements.pop_back();
  CHECK_THROWS_AS(observables_from_measurement(broken, x0, a.state), Error);
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(23);
  Analysis a = random_analysis(3, 2, rng);
  LocallyUnbiasedSet X = canonical_unbiased(a.state, a.slds, a.fisher);
  const UBasis comp = UBasis::computational(3);
  SignChoice signs{Orientation::AsIs, Orientation::Transposed, Orientation::AsIs};
  const RMatrix W = random_spd(2, rng);
  std::vector<CMatrix> grad;
  general_objective(X.X, a.state, comp, signs, W, &grad);
  CMatrix dir = random_hermitian(3, rng);
  const double h = 1e-6;
  auto Xp = X.X, Xm = X.X;
  Xp[1] += h * dir;
  Xm[1] -= h * dir;
  const double fd = (general_objective(Xp, a.state, comp, signs, W, nullptr) -
                     general_objective(Xm, a.state, comp, signs, W, nullptr)) / (2 * h);
  const double an = (dir * grad[1]).trace().real();
  CHECK(fd == doctest::Approx(an).epsilon(1e-5));
}

TEST_CASE("minimizer: weak commutative start is optimal, Holevo value in range") {
  // diagonal family: the QCRB value n is attained at the canonical start
  RVector w(3);
  w << 0.5, 0.3, 0.2;
  RVector v1(3), v2(3);
  v1 << 0.1, -0.3, 0.2;
  v2 << -0.2, 0.05, 0.15;
  EvaluatedState st = make_state(w.cast<Complex>().asDiagonal(),
                                 {CMatrix(v1.cast<Complex>().asDiagonal()), CMatrix(v2.cast<Complex>().asDiagonal())});
  Analysis a = analyze(st);
  MinimizeConfig mc;
  mc.W = a.fisher.F_Q;
  MinimizeResult r = minimize_bound(a.state, a.slds, a.fisher, mc);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));

  Analysis q = analyze(evaluate(build_scenario(ScenarioSpec::parse("qubit3", 0.3)), RVector::Zero(3)));
  mc.W = q.fisher.F_Q;
  mc.max_iters = 3000;
  MinimizeResult h = minimize_bound(q.state, q.slds, q.fisher, mc);
  const double start = holevo_functional(canonical_unbiased(q.state, q.slds, q.fisher), q.state, q.fisher.F_Q);
  CHECK(h.value <= start + 1e-12);
  CHECK(h.value >= 3.0 - 1e-9);  // never below the QCRB value n
  CHECK(h.max_feasibility_residual < 1e-9);
  for (std::size_t i = 1; i < h.trace.size(); ++i) CHECK(h.trace[i] <= h.trace[i - 1]);
}

TEST_CASE("Nagaoka alignment and bad weights") {
  Rng rng(24);
  Analysis a = random_analysis(2, 2, rng);
  LocallyUnbiasedSet X = canonical_unbiased(a.state, a.slds, a.fisher);
  AlignedBasis al = nagaoka_alignment(X, a.state);
  CHECK(al.basis.size() == 2);
  CHECK_THROWS_AS(nagaoka_alignment(X, a.state, 0, 0), Error);
  RMatrix bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(holevo_functional(X, a.state, bad), Error);
  MinimizeConfig mc;
  mc.strategy = BasisStrategy::Nagaoka;
  mc.max_iters = 500;
  MinimizeResult r = minimize_bound(a.state, a.slds, a.fisher, mc);
  CHECK(r.value >= holevo_functional(r.X_opt, a.state, RMatrix::Identity(2, 2)) - 1e-9);
}
