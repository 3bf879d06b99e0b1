#include <doctest.h>

#include "qmetro/error.hpp"
#include "qmetro/scenarios.hpp"

using namespace qmetro;

TEST_CASE("scenario id parsing") {
  CHECK(ScenarioSpec::parse("qubit3").id == ScenarioId::Qubit3);
  CHECK(ScenarioSpec::parse("qutrit8").subset.size() == 8);
  CHECK(ScenarioSpec::parse("qutrit:1,2,5").name() == "qutrit:1,2,5");
  CHECK(ScenarioSpec::parse("qutrit:1,2,3,4,5,6,7,8").name() == "qutrit8");
  CHECK_THROWS_AS(ScenarioSpec::parse("qutrit:1,1"), Error);
  CHECK_THROWS_AS(ScenarioSpec::parse("qutrit:0,2"), Error);
  CHECK_THROWS_AS(ScenarioSpec::parse("qutrit:1,x"), Error);
  CHECK_THROWS_AS(ScenarioSpec::parse("qubit3", 1.0), Error);
  CHECK_THROWS_AS(ScenarioSpec::parse("qutrit8", 0.7), Error);
  CHECK_THROWS_AS(ScenarioSpec::parse("ququart"), Error);
}

TEST_CASE("Gell-Mann algebra") {
  auto g = gell_mann();
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      const Complex t = (g[a] * g[b]).trace();
      CHECK(std::abs(t - Complex(a == b ? 2.0 : 0.0, 0.0)) < 1e-12);
    }
  // closed-form table equals |[G_j, G_k]|_1 with G = Lambda/2
  RMatrix tab = qutrit_C1_table();
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b)
      CHECK(trace_norm(commutator(0.5 * g[a], 0.5 * g[b])) ==
            doctest::Approx(tab(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))).epsilon(1e-12));
}

TEST_CASE("combinatorial closed forms against brute force") {
  auto s = pauli();
  for (int p = 1; p <= 8; ++p) {
    // |sigma_3p|_1 / 2^p with sigma_3p the collective sum
    CMatrix sum = CMatrix::Zero(1 << p, 1 << p);
    for (int r = 0; r < p; ++r) {
      CMatrix t = CMatrix::Identity(1, 1);
      for (int q = 0; q < p; ++q) t = kron(t, q == r ? s[2] : CMatrix(CMatrix::Identity(2, 2)));
      sum += t;
    }
    CHECK(qubit_Np(p) == doctest::Approx(trace_norm(sum) / std::pow(2.0, p)).epsilon(1e-12));
  }
  CHECK(trinomial(2, 0) == 3);
  CHECK(trinomial(3, 1) == 6);
  CHECK(trinomial(4, 4) == 1);
  CHECK(qutrit_Np(1) == 1.0);
  CHECK(qutrit_Np(2) == 4.0);  // 1*2 + 2*1
  CHECK_THROWS_AS(trinomial(41, 0), Error);
  CHECK_THROWS_AS(trinomial(2, 3), Error);
}

TEST_CASE("qubit closed forms at delta = 0") {
  CHECK(qubit_C2_bound(0.0) == doctest::Approx(45.0 / 16.0));
  CHECK(qubit_T2_bound(0.0) == doctest::Approx(47.0 / 16.0));
  CHECK(qubit_Fbar2_bound(0.0) == doctest::Approx(3.0 - 1.0 / 8.0));
  CHECK(qubit_Tp12_closed(0.0, 1) == doctest::Approx(1.0));
  CHECK(qubit_Tp12_closed(0.0, 2) == doctest::Approx(1.0));
  CHECK(qubit_Tp12_closed(0.0, 3) == doctest::Approx(1.5));
  // uniform weights: the general qutrit form reduces to the delta = 0 one
  const std::array<double, 3> w{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const std::array<Complex, 3> c{3.0, -3.0, 0.0};
  for (int p = 1; p <= 5; ++p) CHECK(qutrit_Tp_closed(w, c, p) == doctest::Approx(qutrit_Tp12_delta0(p)));
}

TEST_CASE("built families are valid states") {
  for (const char* id : {"qubit3", "qutrit8", "qutrit:1,2,4,5"}) {
    StateFamily fam = build_scenario(ScenarioSpec::parse(id, 0.3));
    EvaluatedState st = evaluate(fam, RVector::Zero(static_cast<Eigen::Index>(fam.n())));
    CHECK(st.support_rank == fam.dim());
    CHECK(std::abs(st.rho.trace() - Complex(1.0, 0.0)) < 1e-14);
  }
}
