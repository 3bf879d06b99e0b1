#pragma once

#include <optional>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/state.hpp"

namespace qmetro {

enum class DerivativeKind { SLD, RLD };

struct DerivativeSet {
  DerivativeKind kind = DerivativeKind::SLD;
  std::vector<CMatrix> ops;
};

struct FisherData {
  RMatrix F_Q;                    // symmetric
  RMatrix F_Im;                   // skew-symmetric
  std::optional<CMatrix> F_RLD;   // Hermitian, filled by compute_rld_fisher
  RMatrix F_Q_inv_sqrt;
  std::vector<CMatrix> tilde_ops; // tilde SLDs
  std::size_t support_rank = 0;

  std::size_t n() const { return static_cast<std::size_t>(F_Q.rows()); }
  // F_Q^{-1/2} F_Im F_Q^{-1/2}
  RMatrix tilde_F_Im() const;
};

DerivativeSet compute_sld(const EvaluatedState& state);
DerivativeSet compute_rld(const EvaluatedState& state);

FisherData compute_fisher(const EvaluatedState& state, const DerivativeSet& slds);
void compute_rld_fisher(const EvaluatedState& state, const DerivativeSet& rlds, FisherData& fisher);

// L~_j = sum_q (F_Q^{-1/2})_{jq} L_q
std::vector<CMatrix> reparametrize(const DerivativeSet& ops, const FisherData& fisher);

// Tr(rho A_j A_k) for every pair
CMatrix gram_trace(const CMatrix& rho, const std::vector<CMatrix>& ops);

// Sum over eigenpairs 2|(d_j rho)_ab (d_k rho)_ba| / (l_a + l_b); independent route to F_Q.
RMatrix qfim_spectral(const EvaluatedState& state);

// Convenience bundle used throughout the tools.
struct Analysis {
  EvaluatedState state;
  DerivativeSet slds;
  FisherData fisher;
};
Analysis analyze(EvaluatedState state);

}  // namespace qmetro
