#include "qmetro/log_derivatives.hpp"

#include <cmath>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

constexpr double kDefiningTol = 1e-8;
constexpr double kRangeTol = 1e-9;
constexpr double kQfimSingularRel = 1e-10;

double scale_of(const CMatrix& m) { return std::max(1.0, m.norm()); }

}  // namespace

RMatrix FisherData::tilde_F_Im() const { return F_Q_inv_sqrt * F_Im * F_Q_inv_sqrt; }

DerivativeSet compute_sld(const EvaluatedState& state) {
  const CMatrix& V = state.eigen.vectors;
  const RVector& lam = state.eigen.values;
  const Eigen::Index d = V.rows();
  DerivativeSet out{DerivativeKind::SLD, {}};
  for (std::size_t j = 0; j < state.derivs.size(); ++j) {
    const CMatrix& dr = state.derivs[j];
    CMatrix D = V.adjoint() * dr * V;
    CMatrix Le = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        double s = std::max(lam(a), 0.0) + std::max(lam(b), 0.0);
        if (s > state.rank_tol) Le(a, b) = 2.0 * D(a, b) / s;
      }
    }
    CMatrix L = hermitian_part(V * Le * V.adjoint());
    double resid = (0.5 * (L * state.rho + state.rho * L) - dr).norm();
    if (resid > kDefiningTol * scale_of(dr))
      throw Error(ErrorCode::UnsupportedDerivative,
                  "SLD for parameter " + std::to_string(j + 1) + " does not exist (residual " +
                      std::to_string(resid) + ")");
    out.ops.push_back(std::move(L));
  }
  return out;
}

DerivativeSet compute_rld(const EvaluatedState& state) {
  const Eigen::Index d = state.rho.rows();
  CMatrix Pi = state.support_projector();
  CMatrix comp = CMatrix::Identity(d, d) - Pi;
  CMatrix rho_pinv = pinv_psd(state.rho, state.rank_tol);
  DerivativeSet out{DerivativeKind::RLD, {}};
  for (std::size_t j = 0; j < state.derivs.size(); ++j) {
    const CMatrix& dr = state.derivs[j];
    if ((comp * dr).norm() > kRangeTol * scale_of(dr))
      throw Error(ErrorCode::RldUndefined,
                  "derivative " + std::to_string(j + 1) + " leaves the support of rho");
    CMatrix L = rho_pinv * dr;
    if ((state.rho * L - dr).norm() > kDefiningTol * scale_of(dr))
      throw Error(ErrorCode::RldUndefined, "RLD defining equation not satisfied");
    out.ops.push_back(std::move(L));
  }
  return out;
}

CMatrix gram_trace(const CMatrix& rho, const std::vector<CMatrix>& ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  CMatrix G(n, n);
  std::vector<CMatrix> rho_ops;
  rho_ops.reserve(ops.size());
  for (const auto& L : ops) rho_ops.push_back(rho * L);
  // Tr(rho A B) = sum (rho A)_{ab} B_{ba}
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      G(j, k) = (rho_ops[static_cast<std::size_t>(j)].cwiseProduct(ops[static_cast<std::size_t>(k)].transpose())).sum();
  return G;
}

RMatrix qfim_spectral(const EvaluatedState& state) {
  const CMatrix& V = state.eigen.vectors;
  const RVector& lam = state.eigen.values;
  const Eigen::Index d = V.rows();
  const auto n = static_cast<Eigen::Index>(state.derivs.size());
  std::vector<CMatrix> D;
  for (const auto& dr : state.derivs) D.push_back(V.adjoint() * dr * V);
  RMatrix F = RMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      double s = std::max(lam(a), 0.0) + std::max(lam(b), 0.0);
      if (s <= state.rank_tol) continue;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          F(j, k) += 2.0 * (D[static_cast<std::size_t>(j)](a, b) * D[static_cast<std::size_t>(k)](b, a)).real() / s;
    }
  }
  return F;
}

FisherData compute_fisher(const EvaluatedState& state, const DerivativeSet& slds) {
  if (slds.kind != DerivativeKind::SLD) throw Error(ErrorCode::KindMismatch, "compute_fisher needs SLDs");
  CMatrix G = gram_trace(state.rho, slds.ops);
  FisherData f;
  f.support_rank = state.support_rank;
  f.F_Q = 0.5 * (G.real() + G.real().transpose());
  f.F_Im = 0.5 * (G.imag() - G.imag().transpose());

  Eigen::SelfAdjointEigenSolver<RMatrix> es(f.F_Q);
  double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= kQfimSingularRel * top)
    throw Error(ErrorCode::SingularQfim, "quantum Fisher information matrix is singular");
  f.F_Q_inv_sqrt = inv_sqrt_psd(f.F_Q, kQfimSingularRel * top, true);
  f.tilde_ops = reparametrize(slds, f);
  return f;
}

void compute_rld_fisher(const EvaluatedState& state, const DerivativeSet& rlds, FisherData& fisher) {
  if (rlds.kind != DerivativeKind::RLD) throw Error(ErrorCode::KindMismatch, "compute_rld_fisher needs RLDs");
  const auto n = static_cast<Eigen::Index>(rlds.ops.size());
  CMatrix F(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      F(j, k) = (state.rho * rlds.ops[static_cast<std::size_t>(j)] * rlds.ops[static_cast<std::size_t>(k)].adjoint()).trace();
  fisher.F_RLD = hermitian_part(F);
}

std::vector<CMatrix> reparametrize(const DerivativeSet& ops, const FisherData& fisher) {
  const auto n = static_cast<Eigen::Index>(ops.ops.size());
  if (fisher.F_Q_inv_sqrt.rows() != n)
    throw Error(ErrorCode::SingularQfim, "reparametrize: Fisher data missing or mismatched");
  std::vector<CMatrix> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    CMatrix t = CMatrix::Zero(ops.ops[0].rows(), ops.ops[0].cols());
    for (Eigen::Index q = 0; q < n; ++q) t += fisher.F_Q_inv_sqrt(j, q) * ops.ops[static_cast<std::size_t>(q)];
    out.push_back(std::move(t));
  }
  return out;
}

Analysis analyze(EvaluatedState state) {
  DerivativeSet slds = compute_sld(state);
  FisherData fisher = compute_fisher(state, slds);
  return {std::move(state), std::move(slds), std::move(fisher)};
}

}  // namespace qmetro
