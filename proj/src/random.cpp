#include "qmetro/random.hpp"

#include <cmath>

#include "qmetro/error.hpp"

namespace qmetro {

CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

CMatrix random_unitary(std::size_t d, Rng& rng) {
  CMatrix z = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(z.rows(), z.cols());
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Haar measure: absorb the phases of diag(R)
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex rii = r(i, i);
    if (std::abs(rii) > 0.0) q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

CMatrix random_hermitian(std::size_t d, Rng& rng) { return hermitian_part(random_ginibre(d, d, rng)); }

CMatrix random_traceless_hermitian(std::size_t d, Rng& rng) {
  CMatrix h = random_hermitian(d, rng);
  h -= (h.trace() / static_cast<double>(d)) * CMatrix::Identity(h.rows(), h.cols());
  return h;
}

CMatrix random_density(std::size_t d, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = d;
  if (rank > d) throw Error(ErrorCode::InvalidArgument, "random_density: rank > d");
  CMatrix a = random_ginibre(d, rank, rng);
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

std::vector<CMatrix> random_povm(std::size_t d, std::size_t outcomes, Rng& rng) {
  if (outcomes < d) throw Error(ErrorCode::InvalidArgument, "random_povm: need at least d outcomes");
  CMatrix u = random_unitary(outcomes, rng);
  // the first d columns form an isometry V; its rows give sum_a v_a v_a^dag = V^dag V = I
  std::vector<CMatrix> out;
  for (std::size_t a = 0; a < outcomes; ++a) {
    CVector v = u.row(static_cast<Eigen::Index>(a)).head(static_cast<Eigen::Index>(d)).adjoint();
    out.push_back(v * v.adjoint());
  }
  return out;
}

RMatrix random_spd(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = g(rng);
  return a * a.transpose() + 0.5 * RMatrix::Identity(a.rows(), a.cols());
}

}  // namespace qmetro
