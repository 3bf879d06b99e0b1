#include "qmetro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": matrix must be square and nonempty");
}

// largest-magnitude entry made real positive
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best_abs + 1e-14) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  v *= std::conj(v(best)) / best_abs;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

bool lex_real_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() < b(i).real()) return true;
    if (a(i).real() > b(i).real()) return false;
  }
  return false;
}

template <class Mat>
Mat apply_spectral(const EigenSystem& es, const std::vector<double>& f);

}  // namespace

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, max_abs(m));
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_skew_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, max_abs(m));
  return (m + m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

EigenSystem eigh(const CMatrix& m) {
  require_square(m, "eigh");
  if (!is_hermitian(m)) throw Error(ErrorCode::NonHermitian, "eigh: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonHermitian, "eigh: eigensolver failed");

  const Eigen::Index d = m.rows();
  RVector vals = solver.eigenvalues();
  CMatrix vecs = solver.eigenvectors();
  for (Eigen::Index q = 0; q < d; ++q) fix_phase(vecs.col(q));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals(a) != vals(b)) return vals(a) < vals(b);
    return lex_real_less(vecs.col(a), vecs.col(b));
  });

  EigenSystem out{RVector(d), CMatrix(d, d)};
  for (Eigen::Index q = 0; q < d; ++q) {
    out.values(q) = vals(order[static_cast<std::size_t>(q)]);
    out.vectors.col(q) = vecs.col(order[static_cast<std::size_t>(q)]);
  }
  return out;
}

RVector eigvalsh(const CMatrix& m) {
  require_square(m, "eigvalsh");
  if (!is_hermitian(m)) throw Error(ErrorCode::NonHermitian, "eigvalsh: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols()) {
    // Hermitian and skew-Hermitian fast paths: sum of |eigenvalues|
    if (is_hermitian(m, 1e-14)) {
      Eigen::SelfAdjointEigenSolver<CMatrix> s(hermitian_part(m), Eigen::EigenvaluesOnly);
      return s.eigenvalues().cwiseAbs().sum();
    }
    if (is_skew_hermitian(m, 1e-14)) {
      CMatrix h = Complex(0.0, -1.0) * m;
      Eigen::SelfAdjointEigenSolver<CMatrix> s(hermitian_part(h), Eigen::EigenvaluesOnly);
      return s.eigenvalues().cwiseAbs().sum();
    }
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double frobenius_norm_sq(const RMatrix& m) { return m.squaredNorm(); }

double default_rank_tol(const RVector& eigenvalues) {
  double top = eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0;
  return std::max(1e-10 * top, 1e-300);
}

namespace {

template <class Mat>
Mat apply_spectral(const EigenSystem& es, const std::vector<double>& f) {
  const Eigen::Index d = es.vectors.rows();
  CMatrix scaled = es.vectors;
  for (Eigen::Index q = 0; q < d; ++q) scaled.col(q) *= f[static_cast<std::size_t>(q)];
  CMatrix out = scaled * es.vectors.adjoint();
  if constexpr (std::is_same_v<Mat, RMatrix>) {
    return out.real();
  } else {
    return hermitian_part(out);
  }
}

template <class Mat>
Mat spectral_function(const Mat& m, std::optional<double> rank_tol, int mode, bool require_full_rank,
                      const char* what) {
  CMatrix c = m.template cast<Complex>();
  EigenSystem es = eigh(c);
  double tol = rank_tol.value_or(default_rank_tol(es.values));
  std::vector<double> f(static_cast<std::size_t>(es.values.size()));
  for (Eigen::Index q = 0; q < es.values.size(); ++q) {
    double l = es.values(q);
    if (l < -tol) throw Error(ErrorCode::NotPsd, std::string(what) + ": negative eigenvalue " + std::to_string(l));
    bool on_support = l > tol;
    if (!on_support && require_full_rank)
      throw Error(ErrorCode::SingularWhenFullRankRequired, std::string(what) + ": matrix is singular");
    double& out = f[static_cast<std::size_t>(q)];
    switch (mode) {
      case 0: out = on_support ? std::sqrt(l) : 0.0; break;
      case 1: out = on_support ? 1.0 / std::sqrt(l) : 0.0; break;
      default: out = on_support ? 1.0 / l : 0.0; break;
    }
  }
  return apply_spectral<Mat>(es, f);
}

}  // namespace

CMatrix sqrt_psd(const CMatrix& m, std::optional<double> rank_tol) {
  return spectral_function<CMatrix>(m, rank_tol, 0, false, "sqrt_psd");
}

CMatrix inv_sqrt_psd(const CMatrix& m, std::optional<double> rank_tol, bool require_full_rank) {
  return spectral_function<CMatrix>(m, rank_tol, 1, require_full_rank, "inv_sqrt_psd");
}

CMatrix pinv_psd(const CMatrix& m, std::optional<double> rank_tol) {
  return spectral_function<CMatrix>(m, rank_tol, 2, false, "pinv_psd");
}

RMatrix sqrt_psd(const RMatrix& m, std::optional<double> rank_tol) {
  return spectral_function<RMatrix>(m, rank_tol, 0, false, "sqrt_psd");
}

RMatrix inv_sqrt_psd(const RMatrix& m, std::optional<double> rank_tol, bool require_full_rank) {
  return spectral_function<RMatrix>(m, rank_tol, 1, require_full_rank, "inv_sqrt_psd");
}

CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t max_dim) {
  const std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > max_dim || cols > max_dim)
    throw Error(ErrorCode::DimensionOverflow,
                "kron: dimension " + std::to_string(std::max(rows, cols)) + " exceeds cap " + std::to_string(max_dim));
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron_power(const CMatrix& a, int p, std::size_t max_dim) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "kron_power: p must be >= 1");
  CMatrix out = a;
  for (int r = 1; r < p; ++r) out = kron(out, a, max_dim);
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw Error(ErrorCode::DimMismatch, "commutator: dimension mismatch");
  return a * b - b * a;
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw Error(ErrorCode::DimMismatch, "anticommutator: dimension mismatch");
  return a * b + b * a;
}

CMatrix identity(std::size_t d) {
  return CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

}  // namespace qmetro
