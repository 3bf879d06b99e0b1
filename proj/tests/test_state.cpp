#include <doctest.h>

#include <cmath>

#include "qmetro/error.hpp"
#include "qmetro/scenarios.hpp"
#include "qmetro/state.hpp"

using namespace qmetro;

namespace {
ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("linear family evaluation") {
  StateFamily fam = build_scenario(ScenarioSpec::parse("qubit3", 0.5));
  CHECK(fam.dim() == 2);
  CHECK(fam.n() == 3);
  RVector x(3);
  x << 0.1, 0.0, 0.0;
  EvaluatedState st = evaluate(fam, x);
  CHECK(st.rho(0, 1).real() == doctest::Approx(0.05));
  CHECK(st.support_rank == 2);
  CHECK(st.derivs.size() == 3);
  CHECK((st.sqrt_rho() * st.sqrt_rho() - st.rho).norm() < 1e-12);
}

TEST_CASE("validation rejects bad working points") {
  auto s = pauli();
  CMatrix bad = CMatrix::Identity(2, 2);
  CHECK(code_of([&] { make_state(bad, {s[0]}); }) == ErrorCode::InvalidState);
  CMatrix neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  CHECK(code_of([&] { make_state(neg, {s[0]}); }) == ErrorCode::InvalidState);
  CMatrix rho = 0.5 * CMatrix::Identity(2, 2);
  CHECK(code_of([&] { make_state(rho, {CMatrix::Identity(2, 2)}); }) == ErrorCode::DerivativeFailure);
  CHECK_THROWS_AS(StateFamily::linear(rho, {s[0]}, {}), Error);
}

TEST_CASE("finite differences match analytic derivatives") {
  auto s = pauli();
  const Complex I(0, 1);
  // rotated pure state exp(-i(x1 s1 + x2 s2)/2)|0><0|exp(+...)
  StateMap map = [&](const RVector& x) {
    CMatrix h = 0.5 * (x(0) * s[0] + x(1) * s[1]);
    Eigen::ComplexEigenSolver<CMatrix> es(h);
    CMatrix u = es.eigenvectors() * (-I * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                es.eigenvectors().inverse();
    CMatrix psi = CMatrix::Zero(2, 2);
    psi(0, 0) = 1;
    return CMatrix(u * psi * u.adjoint());
  };
  StateFamily fam = StateFamily::callable(2, 2, map);
  EvaluatedState st = evaluate(fam, RVector::Zero(2));
  CMatrix psi = CMatrix::Zero(2, 2);
  psi(0, 0) = 1;
  for (int j = 0; j < 2; ++j) {
    CMatrix exact = -0.5 * I * commutator(s[static_cast<std::size_t>(j)], psi);
    CHECK((st.derivs[static_cast<std::size_t>(j)] - exact).norm() < 1e-8);
  }
  CHECK(st.is_pure());
}

TEST_CASE("JSON round trip") {
  StateFamily fam = build_scenario(ScenarioSpec::parse("qutrit:1,2,5", 0.1));
  RVector x0 = RVector::Zero(3);
  nlohmann::json j = family_to_json(fam, x0);
  FamilyDocument doc = family_from_json(j);
  CHECK(doc.family.n() == 3);
  CHECK(doc.family.labels() == fam.labels());
  EvaluatedState a = evaluate(fam, x0), b = evaluate(doc.family, doc.x0);
  CHECK((a.rho - b.rho).norm() < 1e-15);
  for (std::size_t k = 0; k < 3; ++k) CHECK((a.derivs[k] - b.derivs[k]).norm() < 1e-15);
  CHECK_THROWS(family_from_json(nlohmann::json{{"kind", "nonsense"}}));
}
