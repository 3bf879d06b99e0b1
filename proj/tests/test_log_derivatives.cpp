#include <doctest.h>

#include "qmetro/error.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/random.hpp"
#include "qmetro/scenarios.hpp"

using namespace qmetro;

TEST_CASE("SLDs solve the defining equation and both Fisher routes agree") {
  Rng rng(5);
  for (std::size_t d : {2, 3, 4}) {
    CMatrix rho = random_density(d, rng);
    std::vector<CMatrix> dr{random_traceless_hermitian(d, rng), random_traceless_hermitian(d, rng)};
    EvaluatedState st = make_state(rho, dr);
    DerivativeSet L = compute_sld(st);
    for (std::size_t j = 0; j < 2; ++j) CHECK((0.5 * anticommutator(L.ops[j], rho) - dr[j]).norm() < 1e-10);
    FisherData f = compute_fisher(st, L);
    CHECK((f.F_Q - qfim_spectral(st)).norm() < 1e-10);
    CMatrix G = gram_trace(rho, L.ops);
    CHECK((G.imag() - f.F_Im).norm() < 1e-12);
    // tilde operators have identity QFIM
    CHECK((gram_trace(rho, f.tilde_ops).real() - RMatrix::Identity(2, 2)).norm() < 1e-9);
  }
}

TEST_CASE("RLD Fisher for the diagonal qubit") {
  auto s = pauli();
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  EvaluatedState st = make_state(rho, {0.5 * s[0], 0.5 * s[1]});
  Analysis a = analyze(st);
  CHECK((a.fisher.F_Q - RMatrix::Identity(2, 2)).norm() < 1e-12);
  DerivativeSet R = compute_rld(st);
  FisherData f = a.fisher;
  compute_rld_fisher(st, R, f);
  REQUIRE(f.F_RLD);
  // independent: L = rho^{-1} d rho, F_jk = Tr(rho L_j L_k^dag)
  const CMatrix inv = rho.inverse();
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      CMatrix Lj = inv * (0.5 * s[static_cast<std::size_t>(j)]), Lk = inv * (0.5 * s[static_cast<std::size_t>(k)]);
      Complex want = (rho * Lj * Lk.adjoint()).trace();
      CHECK(std::abs((*f.F_RLD)(j, k) - want) < 1e-12);
    }
  CHECK((*f.F_RLD)(0, 0).real() == doctest::Approx(4.0 / 3.0));
  CHECK(std::abs((*f.F_RLD)(0, 1).imag()) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("error paths") {
  auto s = pauli();
  CMatrix psi = CMatrix::Zero(2, 2);
  psi(0, 0) = 1;
  // derivative outside the support: RLD undefined
  EvaluatedState pure = make_state(psi, {-0.5 * Complex(0, 1) * commutator(s[0], psi)});
  try {
    compute_rld(pure);
    FAIL("expected RldUndefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RldUndefined);
  }
  CMatrix rho = 0.5 * CMatrix::Identity(2, 2);
  EvaluatedState dup = make_state(rho, {s[0], s[0]});
  try {
    analyze(dup);
    FAIL("expected SingularQfim");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularQfim);
  }
}

TEST_CASE("pure family imaginary part") {
  auto s = pauli();
  CMatrix psi = CMatrix::Zero(2, 2);
  psi(0, 0) = 1;
  const Complex I(0, 1);
  Analysis a = analyze(make_state(psi, {-0.5 * I * commutator(s[0], psi), -0.5 * I * commutator(s[1], psi)}));
  CHECK((a.fisher.F_Q - RMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(std::abs(a.fisher.F_Im(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("reparametrization transforms the QFIM congruently") {
  Rng rng(6);
  CMatrix rho = random_density(3, rng);
  std::vector<CMatrix> dr{random_traceless_hermitian(3, rng), random_traceless_hermitian(3, rng)};
  RMatrix A(2, 2);
  A << 1.0, 0.3, -0.7, 2.0;
  std::vector<CMatrix> dr2{A(0, 0) * dr[0] + A(1, 0) * dr[1], A(0, 1) * dr[0] + A(1, 1) * dr[1]};
  RMatrix F = analyze(make_state(rho, dr)).fisher.F_Q;
  RMatrix F2 = analyze(make_state(rho, dr2)).fisher.F_Q;
  CHECK((F2 - A.transpose() * F * A).norm() < 1e-10);
}
