#include "qmetro/gamma_bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

void require_n(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidN, "bounds need n >= 2, got " + std::to_string(n));
}

void require_kind(const TradeoffMatrix& m, TradeoffKind kind, const char* what) {
  if (m.kind != kind)
    throw Error(ErrorCode::KindMismatch, std::string(what) + ": expected " + to_string(kind) + " matrix, got " +
                                              to_string(m.kind));
}

double pairwise_bound(const TradeoffMatrix& m, std::size_t n, int p) {
  require_n(n);
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  if (m.n() != n) throw Error(ErrorCode::DimMismatch, "tradeoff matrix size differs from n");
  const double s = (m.entries / static_cast<double>(p)).squaredNorm();
  return static_cast<double>(n) - s / (4.0 * static_cast<double>(n - 1));
}

double real_trace_norm(const RMatrix& m) { return trace_norm(m.cast<Complex>()); }

RMatrix inverse_spd(const RMatrix& m) { return m.ldlt().solve(RMatrix::Identity(m.rows(), m.cols())); }

}  // namespace

double f_branch(std::size_t n, FBranch branch) {
  require_n(n);
  const double nd = static_cast<double>(n);
  switch (branch) {
    case FBranch::Pairwise: return 1.0 / (4.0 * (nd - 1.0));
    case FBranch::Correlated: return (nd - 2.0) / ((nd - 1.0) * (nd - 1.0));
    case FBranch::LargeN: return 0.2;
    case FBranch::Max: return f_of_n(n);
  }
  return f_of_n(n);
}

double f_of_n(std::size_t n) {
  require_n(n);
  if (n == 2) return f_branch(n, FBranch::Pairwise);
  if (n <= 4) return f_branch(n, FBranch::Correlated);
  return f_branch(n, FBranch::LargeN);
}

double pure_state_bound(const FisherData& fisher) {
  if (fisher.support_rank != 1) throw Error(ErrorCode::NotPure, "pure_state_bound needs a rank-one state");
  const std::size_t n = fisher.n();
  return static_cast<double>(n) - f_of_n(n) * fisher.tilde_F_Im().squaredNorm();
}

double cp_bound(const TradeoffMatrix& C, std::size_t n, int p) {
  require_kind(C, TradeoffKind::C, "cp_bound");
  return pairwise_bound(C, n, p);
}

double tp_bound(const TradeoffMatrix& T, std::size_t n, int p) {
  require_kind(T, TradeoffKind::T, "tp_bound");
  return pairwise_bound(T, n, p);
}

double fbar_bound(const TradeoffMatrix& fbar, const FisherData& fisher, std::size_t n, int p, FBranch branch) {
  require_kind(fbar, TradeoffKind::FBAR_IM, "fbar_bound");
  require_n(n);
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  RMatrix m = fbar.tilded ? fbar.entries : RMatrix(fisher.F_Q_inv_sqrt * fbar.entries * fisher.F_Q_inv_sqrt);
  m /= static_cast<double>(p);
  return static_cast<double>(n) - f_branch(n, branch) * m.squaredNorm();
}

double rld_standard_bound(const FisherData& fisher) {
  if (!fisher.F_RLD) throw Error(ErrorCode::RldUndefined, "RLD Fisher matrix not available");
  const RMatrix re = fisher.F_RLD->real();
  const RMatrix im = fisher.F_RLD->imag();
  const RMatrix Finv = inverse_spd(fisher.F_Q);
  return (Finv * re).trace() - real_trace_norm(fisher.F_Q_inv_sqrt * im * fisher.F_Q_inv_sqrt);
}

double rld_cp_bound(const TradeoffMatrix& C_rld, const FisherData& fisher, std::size_t n, int p) {
  require_kind(C_rld, TradeoffKind::C_RLD, "rld_cp_bound");
  if (!fisher.F_RLD) throw Error(ErrorCode::RldUndefined, "RLD Fisher matrix not available");
  require_n(n);
  const double base = (inverse_spd(fisher.F_Q) * fisher.F_RLD->real()).trace();
  const double s = (C_rld.entries / static_cast<double>(p)).squaredNorm();
  return base - s / (4.0 * static_cast<double>(n - 1));
}

double gamma_inf_lower(const FisherData& fisher, std::size_t n) {
  require_n(n);
  const double nd = static_cast<double>(n);
  return nd * nd / (nd + real_trace_norm(fisher.tilde_F_Im()));
}

double gamma_inf_upper(const FisherData& fisher, std::size_t n) {
  require_n(n);
  return static_cast<double>(n) - fisher.tilde_F_Im().squaredNorm() / (4.0 * static_cast<double>(n - 1));
}

CsTransforms cs_transforms(double gamma_upper, const FisherData& fisher, const RMatrix& W, std::size_t n,
                           double nu) {
  if (!(gamma_upper > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma_upper must be positive");
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
  if (W.rows() != W.cols() || static_cast<std::size_t>(W.rows()) != n)
    throw Error(ErrorCode::DimMismatch, "weight matrix must be n x n");
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, W.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidWeight, "weight matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> ws(0.5 * (W + W.transpose()));
  if (ws.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, ws.eigenvalues().cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidWeight, "weight matrix not PSD");
  const RMatrix Fw = fisher.F_Q_inv_sqrt * W * fisher.F_Q_inv_sqrt;
  Eigen::SelfAdjointEigenSolver<RMatrix> fs(0.5 * (Fw + Fw.transpose()));
  double tr_sqrt = 0.0;
  for (Eigen::Index i = 0; i < fs.eigenvalues().size(); ++i) tr_sqrt += std::sqrt(std::max(0.0, fs.eigenvalues()(i)));
  const double nd = static_cast<double>(n);
  // values bound nu*Tr[. Cov]; nu only rescales the raw covariance trace
  return {nd * nd / gamma_upper, tr_sqrt * tr_sqrt / gamma_upper};
}

ReferenceBounds reference_bounds(std::size_t d, std::size_t n) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "reference bounds need d >= 2");
  ReferenceBounds r;
  const double dd = static_cast<double>(d);
  r.gill_massar = dd - 1.0;
  r.zhu_hayashi = 1.5 * (dd - 1.0);
  r.gill_massar_nontrivial = static_cast<double>(n) > r.gill_massar;
  r.zhu_hayashi_nontrivial = static_cast<double>(n) > r.zhu_hayashi;
  return r;
}

SaturationReport saturation_check(const TradeoffMatrix& C, const RMatrix& F_Im, double tol) {
  SaturationReport s;
  const double p = C.p > 0 ? static_cast<double>(C.p) : 1.0;
  s.partial_commutative = C.entries.size() == 0 || (C.entries / p).cwiseAbs().maxCoeff() <= tol;
  s.weak_commutative = F_Im.size() == 0 || F_Im.cwiseAbs().maxCoeff() <= tol;
  return s;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::Reference: return "reference";
  }
  return "?";
}

void BoundReport::mark_tightest() {
  BoundEntry* best = nullptr;
  for (auto& e : entries) {
    e.tightest = false;
    if (e.kind != BoundKind::Upper) continue;
    if (!best || e.value < best->value - 1e-12) best = &e;
  }
  if (best) best->tightest = true;
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

BoundReport build_report(const Analysis& a, int p, const ReportOptions& opts) {
  const std::size_t n = a.fisher.n();
  require_n(n);
  BoundReport r;
  r.n = n;
  r.p = p;
  auto wants = [&](const char* name) { return opts.bounds.count(name) > 0; };
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error&) {
      if (opts.explicit_selection) throw;
    }
  };

  std::optional<CollectiveOperators> coll;
  auto sld_coll = [&]() -> const CollectiveOperators& {
    if (!coll) coll = build_collective(a.state, a.fisher.tilde_ops, p, DerivativeKind::SLD, true, opts.limits);
    return *coll;
  };

  std::optional<TradeoffMatrix> C;
  if (wants("cp")) {
    guarded([&] {
      C = compute_Cp(sld_coll());
      r.entries.push_back({"cp", cp_bound(*C, n, p), BoundKind::Upper, C->method});
    });
  }
  if (wants("tp")) {
    guarded([&] {
      TradeoffMatrix T;
      try {
        T = compute_Tp_exact(a.state, a.fisher.tilde_ops, p, opts.limits);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EnumerationOverflow) throw;
        T = compute_Tp_monte_carlo(a.state, a.fisher.tilde_ops, p, opts.mc_samples, opts.seed);
        T.method = "enumeration cap exceeded, switched to " + T.method;
      }
      r.entries.push_back({"tp", tp_bound(T, n, p), BoundKind::Upper, T.method});
    });
  }
  if (wants("tp_mc")) {
    guarded([&] {
      TradeoffMatrix T = compute_Tp_monte_carlo(a.state, a.fisher.tilde_ops, p, opts.mc_samples, opts.seed);
      const double se = T.std_error.size() ? T.std_error.maxCoeff() : 0.0;
      r.entries.push_back({"tp_mc", tp_bound(T, n, p), BoundKind::Upper,
                           T.method + ", max entry std error=" + std::to_string(se)});
    });
  }
  if (wants("fbar")) {
    guarded([&] {
      const RMatrix I = RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      TradeoffMatrix F = best_Fbar_im(sld_coll(), I);
      r.entries.push_back({"fbar", fbar_bound(F, a.fisher, n, p, opts.fbar_branch), BoundKind::Upper, F.method});
    });
  }
  if (wants("rld") || wants("rld_cp")) {
    guarded([&] {
      DerivativeSet rlds = compute_rld(a.state);
      FisherData f = a.fisher;
      compute_rld_fisher(a.state, rlds, f);
      if (wants("rld"))
        r.entries.push_back({"rld", rld_standard_bound(f), BoundKind::Upper, "standard RLD bound, p-independent"});
      if (wants("rld_cp")) {
        auto tilde = reparametrize(rlds, f);
        auto rc = build_collective(a.state, tilde, p, DerivativeKind::RLD, true, opts.limits);
        TradeoffMatrix Cr = compute_Cp_rld(rc);
        r.entries.push_back({"rld_cp", rld_cp_bound(Cr, f, n, p), BoundKind::Upper, Cr.method});
      }
    });
  }
  if (wants("pure")) {
    guarded([&] {
      r.entries.push_back({"pure", pure_state_bound(a.fisher), BoundKind::Upper, "pure state, p-independent"});
    });
  }
  if (wants("lower")) {
    r.entries.push_back({"gamma_inf_lower", gamma_inf_lower(a.fisher, n), BoundKind::Reference,
                         "lower bound on Gamma_inf (p -> infinity)"});
    r.entries.push_back({"gamma_inf_upper", gamma_inf_upper(a.fisher, n), BoundKind::Reference,
                         "upper bound on Gamma_inf (p -> infinity)"});
  }
  if (wants("refs")) {
    ReferenceBounds rb = reference_bounds(a.state.dim(), n);
    r.entries.push_back({"gill_massar", rb.gill_massar, BoundKind::Reference,
                         std::string("Gamma_1 <= d-1, ") + (rb.gill_massar_nontrivial ? "nontrivial" : "trivial")});
    r.entries.push_back({"zhu_hayashi", rb.zhu_hayashi, BoundKind::Reference,
                         std::string("Gamma_2 <= 3(d-1)/2, ") + (rb.zhu_hayashi_nontrivial ? "nontrivial" : "trivial")});
  }

  TradeoffMatrix Csat = C ? *C : TradeoffMatrix{};
  if (!C) {
    try {
      Csat = compute_Cp(sld_coll());
    } catch (const Error&) {
      Csat.entries = RMatrix();
    }
  }
  r.saturation = saturation_check(Csat, a.fisher.F_Im);
  r.mark_tightest();
  return r;
}

}  // namespace qmetro
