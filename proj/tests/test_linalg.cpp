#include <doctest.h>

#include <cmath>

#include "qmetro/error.hpp"
#include "qmetro/linalg.hpp"
#include "qmetro/random.hpp"

using namespace qmetro;

TEST_CASE("eigh returns ascending values and a unitary basis") {
  Rng rng(1);
  for (std::size_t d : {1, 2, 5, 9}) {
    CMatrix h = random_hermitian(d, rng);
    EigenSystem es = eigh(h);
    for (Eigen::Index i = 1; i < es.values.size(); ++i) CHECK(es.values(i - 1) <= es.values(i));
    CMatrix back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK((back - h).norm() < 1e-10);
    CHECK((es.vectors.adjoint() * es.vectors - CMatrix::Identity(d, d)).norm() < 1e-10);
  }
}

TEST_CASE("trace norm agrees with singular values") {
  Rng rng(2);
  for (std::size_t d : {2, 3, 7}) {
    CMatrix m = random_ginibre(d, d, rng);
    Eigen::JacobiSVD<CMatrix> svd(m);
    CHECK(trace_norm(m) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
    CMatrix h = random_hermitian(d, rng);
    CHECK(trace_norm(h) == doctest::Approx(eigvalsh(h).cwiseAbs().sum()).epsilon(1e-12));
    CMatrix skew = Complex(0, 1) * h;
    CHECK(trace_norm(skew) == doctest::Approx(eigvalsh(h).cwiseAbs().sum()).epsilon(1e-12));
  }
}

TEST_CASE("psd square roots and pseudo-inverse") {
  Rng rng(3);
  CMatrix rho = random_density(4, rng);
  CMatrix s = sqrt_psd(rho);
  CHECK((s * s - rho).norm() < 1e-12);
  CMatrix is = inv_sqrt_psd(rho);
  CHECK((is * rho * is - CMatrix::Identity(4, 4)).norm() < 1e-9);
  CMatrix low = random_density(4, rng, 2);
  CMatrix pi = pinv_psd(low);
  CHECK((low * pi * low - low).norm() < 1e-10);
  CHECK_THROWS_AS(inv_sqrt_psd(low, std::nullopt, true), Error);
}

TEST_CASE("kron, commutators and caps") {
  CMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  CMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1, 0));
  CHECK(k(3, 2) == Complex(4, 0));
  CHECK(kron_power(identity(2), 3).rows() == 8);
  try {
    kron_power(identity(2), 20, 1024);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionOverflow);
  }
  CHECK((commutator(a, b) - (a * b - b * a)).norm() == 0.0);
  CHECK((anticommutator(a, b) - (a * b + b * a)).norm() == 0.0);
  CHECK_THROWS_AS(commutator(a, identity(3)), Error);
}

TEST_CASE("hermiticity predicates") {
  Rng rng(4);
  CMatrix h = random_hermitian(3, rng);
  CHECK(is_hermitian(h));
  CHECK(is_skew_hermitian(Complex(0, 1) * h));
  h(0, 1) += 1e-6;
  CHECK_FALSE(is_hermitian(h));
  CHECK(is_hermitian(hermitian_part(h)));
}
