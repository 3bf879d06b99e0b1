#pragma once

#include <cstdint>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/state.hpp"
#include "qmetro/tensor_bounds.hpp"

namespace qmetro {

struct LocallyUnbiasedSet {
  std::vector<CMatrix> X;
  RVector mean_residuals;        // Tr(rho X_j)
  RMatrix derivative_residuals;  // Tr(d_k rho X_j) - delta_jk, row j
  double max_residual() const;
};

struct LocalMeasurement {
  std::vector<CMatrix> elements;
  std::vector<RVector> estimates;
};

struct PairMatrices {
  std::vector<CMatrix> A_u, B_u, F_u;
  CMatrix A_bar, B_bar, F_bar;
};

// Recomputes the residuals of X against the state.
LocallyUnbiasedSet with_residuals(std::vector<CMatrix> X, const EvaluatedState& state);

LocallyUnbiasedSet observables_from_measurement(const LocalMeasurement& meas, const RVector& x0,
                                                const EvaluatedState& state);
LocallyUnbiasedSet project_unbiased(const std::vector<CMatrix>& X_raw, const EvaluatedState& state);
// X_j = sum_k (F_Q^{-1})_jk L_k
LocallyUnbiasedSet canonical_unbiased(const EvaluatedState& state, const DerivativeSet& slds,
                                      const FisherData& fisher);

// (A_u)_jk = <u|sqrt(rho) X_j X_k sqrt(rho)|u>, (B_u)_jk = <u|sqrt(rho) X_j L_k sqrt(rho)|u>,
// (F_u)_jk = <u|sqrt(rho) L_j L_k sqrt(rho)|u>; aggregates follow the sign choice.
PairMatrices pair_matrices(const LocallyUnbiasedSet& X, const DerivativeSet& slds, const EvaluatedState& state,
                           UBasis basis, const SignChoice& signs);

// (Cov_u)_jk = sum_a (xh_j - x_j)(xh_k - x_k) <u|sqrt(rho) M_a sqrt(rho)|u>
RMatrix cov_u(const LocalMeasurement& meas, const RVector& x0, const EvaluatedState& state, const CVector& u);
RMatrix covariance(const LocalMeasurement& meas, const RVector& x0, const EvaluatedState& state);

// Tr[W Abar_Re] + |sqrt(W) Abar_Im sqrt(W)|_1
double evaluate_general_bound(const LocallyUnbiasedSet& X, const EvaluatedState& state, UBasis basis,
                              const SignChoice& signs, const RMatrix& W);
// Independent route: Z_jk = Tr(rho X_j X_k)
double holevo_functional(const LocallyUnbiasedSet& X, const EvaluatedState& state, const RMatrix& W);
// Eigenbasis of sqrt(rho)[X_j, X_k]sqrt(rho) with signs aligned to that pair.
struct AlignedBasis {
  UBasis basis;
  SignChoice signs;
};
AlignedBasis nagaoka_alignment(const LocallyUnbiasedSet& X, const EvaluatedState& state, std::size_t j = 0,
                               std::size_t k = 1);

enum class BasisStrategy { Holevo, Nagaoka, ExhaustiveComputational };

struct MinimizeConfig {
  BasisStrategy strategy = BasisStrategy::Holevo;
  RMatrix W;                 // empty means identity
  int max_iters = 5000;
  double step = 0.1;
  double tol = 1e-7;
  std::uint64_t seed = 0;    // reserved for multi-start; the descent itself is deterministic
  std::size_t pair_j = 0;
  std::size_t pair_k = 1;
};

struct MinimizeResult {
  double value = 0.0;
  LocallyUnbiasedSet X_opt;
  std::vector<double> trace;  // best value after each iteration
  bool converged = false;
  int iterations = 0;
  double max_feasibility_residual = 0.0;
};

MinimizeResult minimize_bound(const EvaluatedState& state, const DerivativeSet& slds, const FisherData& fisher,
                              const MinimizeConfig& config);

// Objective and its gradient (w.r.t. each Hermitian X_j) for a fixed basis and signs.
double general_objective(const std::vector<CMatrix>& X, const EvaluatedState& state, const UBasis& basis,
                         const SignChoice& signs, const RMatrix& W, std::vector<CMatrix>* grad);

}  // namespace qmetro
