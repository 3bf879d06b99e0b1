#pragma once

#include <complex>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

namespace qmetro {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr std::size_t kDefaultMaxDim = 16384;

// Ascending eigenvalues, orthonormal eigenvector columns.
struct EigenSystem {
  RVector values;
  CMatrix vectors;
};

// Per-entry check |m_jk - conj(m_kj)| <= tol * max(1, max|m|).
bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
bool is_skew_hermitian(const CMatrix& m, double tol = kHermitianTol);
CMatrix hermitian_part(const CMatrix& m);

// Deterministic: ascending values, equal values ordered by the real parts of
// their eigenvectors, each vector's largest-magnitude entry made real positive.
EigenSystem eigh(const CMatrix& m);
RVector eigvalsh(const CMatrix& m);

double trace_norm(const CMatrix& m);
double frobenius_norm_sq(const RMatrix& m);

// 1e-10 * largest eigenvalue (absolute floor of 1e-300 for the zero matrix).
double default_rank_tol(const RVector& eigenvalues);

CMatrix sqrt_psd(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);
CMatrix inv_sqrt_psd(const CMatrix& m, std::optional<double> rank_tol = std::nullopt,
                     bool require_full_rank = false);
CMatrix pinv_psd(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);

// Real symmetric variants used for Fisher matrices and weights.
RMatrix sqrt_psd(const RMatrix& m, std::optional<double> rank_tol = std::nullopt);
RMatrix inv_sqrt_psd(const RMatrix& m, std::optional<double> rank_tol = std::nullopt,
                     bool require_full_rank = false);

CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t max_dim = kDefaultMaxDim);
CMatrix kron_power(const CMatrix& a, int p, std::size_t max_dim = kDefaultMaxDim);
CVector kron(const CVector& a, const CVector& b);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

CMatrix identity(std::size_t d);

}  // namespace qmetro
