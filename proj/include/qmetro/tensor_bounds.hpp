#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/state.hpp"

namespace qmetro {

struct Limits {
  std::size_t max_dim = kDefaultMaxDim;
  std::size_t max_enumeration = 2'000'000;
};

// Reads QMETRO_MAX_DIM when set.
Limits limits_from_env(Limits base = {});

struct CollectiveOperators {
  int p = 1;
  std::size_t d = 0;
  DerivativeKind kind = DerivativeKind::SLD;
  bool tilded = true;
  CMatrix rho;                    // single copy
  CMatrix sqrt_rho;
  std::vector<CMatrix> single_ops;
  CMatrix rho_p;
  CMatrix sqrt_rho_p;
  std::vector<CMatrix> L_jp;

  std::size_t dim() const { return static_cast<std::size_t>(rho_p.rows()); }
  std::size_t n() const { return single_ops.size(); }
};

CollectiveOperators build_collective(const EvaluatedState& state, const std::vector<CMatrix>& ops, int p,
                                     DerivativeKind kind = DerivativeKind::SLD, bool tilded = true,
                                     const Limits& limits = {});

// sum_r I^{(r-1)} (x) a (x) I^{(p-r)}
CMatrix embed_sum(const CMatrix& a, int p, std::size_t max_dim = kDefaultMaxDim);

// sqrt(rho)^{(x)p} [A_p, B_p] sqrt(rho)^{(x)p} via sum_r rho^{(r-1)} (x) K (x) rho^{(p-r)}.
CMatrix sandwiched_commutator(const CollectiveOperators& coll, std::size_t j, std::size_t k);

struct UBasis {
  std::vector<CVector> vectors;
  bool completeness_checked = false;

  static UBasis computational(std::size_t dim);
  static UBasis from_columns(const CMatrix& columns);
  std::size_t size() const { return vectors.size(); }
};

// Throws IncompleteBasis unless sum |u><u| = I within tol.
void check_completeness(UBasis& basis, double tol = 1e-9);

// Product eigenbasis of rho^{(x)p}.
UBasis rho_eigenbasis(const CollectiveOperators& coll);
// Eigenbasis of sqrt(rho_p)[L_jp, L_kp]sqrt(rho_p).
UBasis commutator_eigenbasis(const CollectiveOperators& coll, std::size_t j, std::size_t k);

enum class Orientation { AsIs, Transposed };
using SignChoice = std::vector<Orientation>;

struct AutoAlign {
  std::size_t j = 0;
  std::size_t k = 1;
};

enum class TradeoffKind { C, T, C_RLD, FBAR_IM };
std::string to_string(TradeoffKind kind);

struct TradeoffMatrix {
  TradeoffKind kind = TradeoffKind::C;
  int p = 1;
  RMatrix entries;
  bool tilded = true;   // FBAR_IM: built from tilde operators, no further F_Q^{-1/2} needed
  std::string method;
  RMatrix std_error;    // Monte Carlo only

  std::size_t n() const { return static_cast<std::size_t>(entries.rows()); }
};

TradeoffMatrix compute_Cp(const CollectiveOperators& coll);
// Same contract without the site-sum identity: forms L_jp products densely.
TradeoffMatrix compute_Cp_dense(const CollectiveOperators& coll);
TradeoffMatrix compute_Cp_rld(const CollectiveOperators& coll);

TradeoffMatrix compute_Tp_exact(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds, int p,
                                const Limits& limits = {});
TradeoffMatrix compute_Tp_monte_carlo(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds, int p,
                                      std::size_t samples, std::uint64_t seed);
// Number of occupation vectors C(p+m-1, m-1), saturating.
double composition_count(int p, std::size_t m);

// F_u for every u: (F_u)_jk = <u|sqrt(rho_p) L_jp^dag... see compute_Fbar_im.
std::vector<CMatrix> compute_Fu(const CollectiveOperators& coll, const UBasis& basis);

TradeoffMatrix compute_Fbar_im(const CollectiveOperators& coll, UBasis basis, const SignChoice& signs);
TradeoffMatrix compute_Fbar_im(const CollectiveOperators& coll, AutoAlign align);

// Maximizes |N Fbar_Im N|_F over sign choices (N = normalizer).
// Exhaustive when |basis| <= 12, otherwise greedy single-flip ascent from the
// per-vector aligned start.
struct FbarSearch {
  TradeoffMatrix fbar;
  SignChoice signs;
  bool exhaustive = false;
};
FbarSearch optimize_Fbar_im(const CollectiveOperators& coll, UBasis basis, const RMatrix& normalizer);

// Best over computational basis, rho eigenbasis and every AutoAlign pair.
TradeoffMatrix best_Fbar_im(const CollectiveOperators& coll, const RMatrix& normalizer);

// 1/2 |Tr(rho [L_j, L_k])|
TradeoffMatrix limit_Fim(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds);

}  // namespace qmetro
