#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/tensor_bounds.hpp"

namespace qmetro {

// Branches of f(n); Max is the piecewise rule used by default.
enum class FBranch { Max, Pairwise, Correlated, LargeN };

double f_of_n(std::size_t n);
double f_branch(std::size_t n, FBranch branch);

double pure_state_bound(const FisherData& fisher);
double cp_bound(const TradeoffMatrix& C, std::size_t n, int p);
double tp_bound(const TradeoffMatrix& T, std::size_t n, int p);
double fbar_bound(const TradeoffMatrix& fbar, const FisherData& fisher, std::size_t n, int p,
                  FBranch branch = FBranch::Max);
double rld_standard_bound(const FisherData& fisher);
double rld_cp_bound(const TradeoffMatrix& C_rld, const FisherData& fisher, std::size_t n, int p);
double gamma_inf_lower(const FisherData& fisher, std::size_t n);
// n - |F~_Im|_F^2 / (4(n-1)), the p -> infinity end of the C_p bound
double gamma_inf_upper(const FisherData& fisher, std::size_t n);

struct CsTransforms {
  double fisher_weighted;  // lower bound on nu Tr[F_Q Cov]
  double weighted;         // lower bound on nu Tr[W Cov]
};
CsTransforms cs_transforms(double gamma_upper, const FisherData& fisher, const RMatrix& W, std::size_t n,
                           double nu = 1.0);

struct ReferenceBounds {
  double gill_massar = 0.0;
  bool gill_massar_nontrivial = false;
  double zhu_hayashi = 0.0;
  bool zhu_hayashi_nontrivial = false;
};
ReferenceBounds reference_bounds(std::size_t d, std::size_t n);

// Necessary condition only; never claims saturation.
struct SaturationReport {
  bool partial_commutative = false;
  bool weak_commutative = false;
};
SaturationReport saturation_check(const TradeoffMatrix& C, const RMatrix& F_Im, double tol = 1e-8);

enum class BoundKind { Upper, Lower, Reference };
std::string to_string(BoundKind kind);

struct BoundEntry {
  std::string name;
  double value = 0.0;
  BoundKind kind = BoundKind::Upper;
  std::string method;
  bool tightest = false;
};

struct BoundReport {
  std::size_t n = 0;
  int p = 1;
  double nu = 1.0;
  std::vector<BoundEntry> entries;
  std::optional<RMatrix> W;
  SaturationReport saturation;

  void mark_tightest();
  const BoundEntry* find(const std::string& name) const;
};

struct ReportOptions {
  std::set<std::string> bounds{"cp", "tp", "fbar", "rld", "rld_cp", "pure", "lower", "refs"};
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  Limits limits;
  FBranch fbar_branch = FBranch::Max;
  bool explicit_selection = false;  // errors in a requested bound propagate instead of being skipped
};

BoundReport build_report(const Analysis& analysis, int p, const ReportOptions& opts = {});

}  // namespace qmetro
