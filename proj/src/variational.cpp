#include "qmetro/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

constexpr double kAlignTie = 1e-12;
constexpr std::size_t kExhaustiveMax = 12;

struct Constraints {
  std::vector<CMatrix> C;  // rho, d_1 rho, ..., d_n rho
  Eigen::LDLT<RMatrix> gram;
};

Constraints make_constraints(const EvaluatedState& state) {
  Constraints c;
  c.C.push_back(state.rho);
  for (const auto& d : state.derivs) c.C.push_back(d);
  const auto m = static_cast<Eigen::Index>(c.C.size());
  RMatrix G(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      G(a, b) = (c.C[static_cast<std::size_t>(a)].cwiseProduct(c.C[static_cast<std::size_t>(b)].transpose())).sum().real();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(G);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top)
    throw Error(ErrorCode::DegenerateConstraints, "unbiasedness constraints are linearly dependent");
  c.gram.compute(G);
  return c;
}

// <C, X> = Re Tr(C X)
double pairing(const CMatrix& C, const CMatrix& X) { return (C.cwiseProduct(X.transpose())).sum().real(); }

// Frobenius projection of X onto {<C_0,X> = t_0, <C_k,X> = t_k}
CMatrix project_one(const Constraints& c, const CMatrix& X, const RVector& target) {
  const auto m = static_cast<Eigen::Index>(c.C.size());
  RVector r(m);
  for (Eigen::Index a = 0; a < m; ++a) r(a) = pairing(c.C[static_cast<std::size_t>(a)], X) - target(a);
  RVector mu = c.gram.solve(r);
  CMatrix out = X;
  for (Eigen::Index a = 0; a < m; ++a) out -= mu(a) * c.C[static_cast<std::size_t>(a)];
  return hermitian_part(out);
}

RVector unit_target(std::size_t n, std::size_t j) {
  RVector t = RVector::Zero(static_cast<Eigen::Index>(n + 1));
  t(static_cast<Eigen::Index>(j + 1)) = 1.0;
  return t;
}

std::vector<CMatrix> project_all(const Constraints& c, const std::vector<CMatrix>& X, bool tangent) {
  const std::size_t n = X.size();
  std::vector<CMatrix> out;
  for (std::size_t j = 0; j < n; ++j)
    out.push_back(project_one(c, X[j], tangent ? RVector(RVector::Zero(static_cast<Eigen::Index>(n + 1)))
                                                : unit_target(n, j)));
  return out;
}

void require_weight(const RMatrix& W, std::size_t n) {
  if (static_cast<std::size_t>(W.rows()) != n || W.rows() != W.cols())
    throw Error(ErrorCode::InvalidWeight, "weight matrix must be n x n");
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, W.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidWeight, "weight matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(W);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidWeight, "weight matrix must be PSD");
}

RMatrix weight_or_identity(const RMatrix& W, std::size_t n) {
  if (W.size() == 0) return RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return W;
}

}  // namespace

double LocallyUnbiasedSet::max_residual() const {
  double m = 0.0;
  if (mean_residuals.size()) m = std::max(m, mean_residuals.cwiseAbs().maxCoeff());
  if (derivative_residuals.size()) m = std::max(m, derivative_residuals.cwiseAbs().maxCoeff());
  return m;
}

LocallyUnbiasedSet with_residuals(std::vector<CMatrix> X, const EvaluatedState& state) {
  LocallyUnbiasedSet s;
  const auto n = static_cast<Eigen::Index>(X.size());
  const auto nd = static_cast<Eigen::Index>(state.derivs.size());
  s.mean_residuals = RVector(n);
  s.derivative_residuals = RMatrix(n, nd);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.mean_residuals(j) = pairing(state.rho, X[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < nd; ++k)
      s.derivative_residuals(j, k) =
          pairing(state.derivs[static_cast<std::size_t>(k)], X[static_cast<std::size_t>(j)]) - (j == k ? 1.0 : 0.0);
  }
  s.X = std::move(X);
  return s;
}

LocallyUnbiasedSet observables_from_measurement(const LocalMeasurement& meas, const RVector& x0,
                                                const EvaluatedState& state) {
  if (meas.elements.size() != meas.estimates.size() || meas.elements.empty())
    throw Error(ErrorCode::InvalidArgument, "measurement needs one estimate per element");
  const Eigen::Index d = meas.elements.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& M : meas.elements) sum += M;
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "POVM elements do not sum to identity");
  const auto n = x0.size();
  std::vector<CMatrix> X(static_cast<std::size_t>(n), CMatrix::Zero(d, d));
  for (std::size_t a = 0; a < meas.elements.size(); ++a) {
    if (meas.estimates[a].size() != n) throw Error(ErrorCode::DimMismatch, "estimate length differs from n");
    for (Eigen::Index j = 0; j < n; ++j)
      X[static_cast<std::size_t>(j)] += (meas.estimates[a](j) - x0(j)) * meas.elements[a];
  }
  for (auto& x : X) x = hermitian_part(x);
  return with_residuals(std::move(X), state);
}

LocallyUnbiasedSet project_unbiased(const std::vector<CMatrix>& X_raw, const EvaluatedState& state) {
  if (X_raw.size() != state.n()) throw Error(ErrorCode::DimMismatch, "need one operator per parameter");
  Constraints c = make_constraints(state);
  std::vector<CMatrix> herm;
  for (const auto& x : X_raw) herm.push_back(hermitian_part(x));
  return with_residuals(project_all(c, herm, false), state);
}

LocallyUnbiasedSet canonical_unbiased(const EvaluatedState& state, const DerivativeSet& slds,
                                      const FisherData& fisher) {
  const RMatrix Finv = fisher.F_Q.ldlt().solve(RMatrix::Identity(fisher.F_Q.rows(), fisher.F_Q.cols()));
  std::vector<CMatrix> X;
  for (Eigen::Index j = 0; j < Finv.rows(); ++j) {
    CMatrix x = CMatrix::Zero(state.rho.rows(), state.rho.cols());
    for (Eigen::Index k = 0; k < Finv.cols(); ++k) x += Finv(j, k) * slds.ops[static_cast<std::size_t>(k)];
    X.push_back(hermitian_part(x));
  }
  return with_residuals(std::move(X), state);
}

PairMatrices pair_matrices(const LocallyUnbiasedSet& X, const DerivativeSet& slds, const EvaluatedState& state,
                           UBasis basis, const SignChoice& signs) {
  if (!basis.completeness_checked) check_completeness(basis);
  if (signs.size() != basis.size()) throw Error(ErrorCode::DimMismatch, "sign choice length differs from basis");
  const auto n = static_cast<Eigen::Index>(X.X.size());
  const CMatrix sr = state.sqrt_rho();
  PairMatrices pm;
  pm.A_bar = pm.B_bar = pm.F_bar = CMatrix::Zero(n, n);
  for (std::size_t q = 0; q < basis.size(); ++q) {
    const CVector v = sr * basis.vectors[q];
    std::vector<CVector> a, l;
    for (Eigen::Index j = 0; j < n; ++j) {
      a.push_back(X.X[static_cast<std::size_t>(j)] * v);
      l.push_back(slds.ops[static_cast<std::size_t>(j)] * v);
    }
    CMatrix A(n, n), B(n, n), F(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        A(j, k) = a[static_cast<std::size_t>(j)].dot(a[static_cast<std::size_t>(k)]);
        B(j, k) = a[static_cast<std::size_t>(j)].dot(l[static_cast<std::size_t>(k)]);
        F(j, k) = l[static_cast<std::size_t>(j)].dot(l[static_cast<std::size_t>(k)]);
      }
    if (signs[q] == Orientation::AsIs) {
      pm.A_bar += A;
      pm.B_bar += B;
      pm.F_bar += F;
    } else {
      pm.A_bar += A.transpose();
      pm.B_bar += B.conjugate();
      pm.F_bar += F.transpose();
    }
    pm.A_u.push_back(std::move(A));
    pm.B_u.push_back(std::move(B));
    pm.F_u.push_back(std::move(F));
  }
  return pm;
}

RMatrix cov_u(const LocalMeasurement& meas, const RVector& x0, const EvaluatedState& state, const CVector& u) {
  const CVector v = state.sqrt_rho() * u;
  const auto n = x0.size();
  RMatrix C = RMatrix::Zero(n, n);
  for (std::size_t a = 0; a < meas.elements.size(); ++a) {
    const double w = v.dot(meas.elements[a] * v).real();
    const RVector dx = meas.estimates[a] - x0;
    C += w * dx * dx.transpose();
  }
  return C;
}

RMatrix covariance(const LocalMeasurement& meas, const RVector& x0, const EvaluatedState& state) {
  const auto n = x0.size();
  RMatrix C = RMatrix::Zero(n, n);
  for (std::size_t a = 0; a < meas.elements.size(); ++a) {
    const double w = (state.rho * meas.elements[a]).trace().real();
    const RVector dx = meas.estimates[a] - x0;
    C += w * dx * dx.transpose();
  }
  return C;
}

double general_objective(const std::vector<CMatrix>& X, const EvaluatedState& state, const UBasis& basis,
                         const SignChoice& signs, const RMatrix& W, std::vector<CMatrix>* grad) {
  const auto n = static_cast<Eigen::Index>(X.size());
  const CMatrix sr = state.sqrt_rho();
  std::vector<CVector> vs;
  std::vector<std::vector<CVector>> as;
  CMatrix Abar = CMatrix::Zero(n, n);
  for (std::size_t q = 0; q < basis.size(); ++q) {
    CVector v = sr * basis.vectors[q];
    std::vector<CVector> a;
    for (Eigen::Index j = 0; j < n; ++j) a.push_back(X[static_cast<std::size_t>(j)] * v);
    CMatrix A(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) A(j, k) = a[static_cast<std::size_t>(j)].dot(a[static_cast<std::size_t>(k)]);
    Abar += signs[q] == Orientation::AsIs ? A : CMatrix(A.transpose());
    vs.push_back(std::move(v));
    as.push_back(std::move(a));
  }
  const RMatrix re = 0.5 * (Abar.real() + Abar.real().transpose());
  const RMatrix im = 0.5 * (Abar.imag() - Abar.imag().transpose());
  const RMatrix sW = sqrt_psd(W);
  const RMatrix K = sW * im * sW;
  Eigen::JacobiSVD<RMatrix> svd(K, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double value = (W * re).trace() + svd.singularValues().sum();
  if (!grad) return value;

  // subgradient of the nuclear norm: sum over nonzero singular values of u_i v_i^T
  RMatrix G = RMatrix::Zero(n, n);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-12 * std::max(1.0, smax))
      G += svd.matrixU().col(i) * svd.matrixV().col(i).transpose();
  const RMatrix H = sW * G * sW;
  // dJ = Re sum_jk Omega_jk dAbar_jk with Omega = W - iH
  const CMatrix Omega = W.cast<Complex>() - Complex(0.0, 1.0) * H.cast<Complex>();

  grad->assign(static_cast<std::size_t>(n), CMatrix::Zero(state.rho.rows(), state.rho.cols()));
  for (std::size_t q = 0; q < basis.size(); ++q) {
    const CMatrix Om = signs[q] == Orientation::AsIs ? Omega : CMatrix(Omega.conjugate());
    const CVector& v = vs[q];
    const auto& a = as[q];
    for (Eigen::Index m = 0; m < n; ++m) {
      CVector left = CVector::Zero(v.size());
      CVector right = CVector::Zero(v.size());
      for (Eigen::Index k = 0; k < n; ++k) {
        left += Om(m, k) * a[static_cast<std::size_t>(k)];
        right += std::conj(Om(k, m)) * a[static_cast<std::size_t>(k)];
      }
      (*grad)[static_cast<std::size_t>(m)] += left * v.adjoint() + v * right.adjoint();
    }
  }
  for (auto& g : *grad) g = hermitian_part(g);
  return value;
}

double evaluate_general_bound(const LocallyUnbiasedSet& X, const EvaluatedState& state, UBasis basis,
                              const SignChoice& signs, const RMatrix& W) {
  require_weight(W, X.X.size());
  if (!basis.completeness_checked) check_completeness(basis);
  if (signs.size() != basis.size()) throw Error(ErrorCode::DimMismatch, "sign choice length differs from basis");
  return general_objective(X.X, state, basis, signs, W, nullptr);
}

double holevo_functional(const LocallyUnbiasedSet& X, const EvaluatedState& state, const RMatrix& W) {
  require_weight(W, X.X.size());
  const auto n = static_cast<Eigen::Index>(X.X.size());
  CMatrix Z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      Z(j, k) = (state.rho * X.X[static_cast<std::size_t>(j)] * X.X[static_cast<std::size_t>(k)]).trace();
  const RMatrix sW = sqrt_psd(W);
  const RMatrix im = sW * Z.imag() * sW;
  return (W * Z.real()).trace() + trace_norm(im.cast<Complex>());
}

AlignedBasis nagaoka_alignment(const LocallyUnbiasedSet& X, const EvaluatedState& state, std::size_t j,
                               std::size_t k) {
  if (j >= X.X.size() || k >= X.X.size() || j == k) throw Error(ErrorCode::OutOfRange, "invalid pair");
  const CMatrix sr = state.sqrt_rho();
  const CMatrix K = sr * commutator(X.X[j], X.X[k]) * sr;
  AlignedBasis out;
  out.basis = UBasis::from_columns(eigh(hermitian_part(Complex(0.0, -1.0) * K)).vectors);
  out.basis.completeness_checked = true;
  for (const auto& u : out.basis.vectors) {
    const CVector v = sr * u;
    const double a = (X.X[j] * v).dot(X.X[k] * v).imag();
    out.signs.push_back(a >= -kAlignTie ? Orientation::AsIs : Orientation::Transposed);
  }
  return out;
}

MinimizeResult minimize_bound(const EvaluatedState& state, const DerivativeSet& slds, const FisherData& fisher,
                              const MinimizeConfig& config) {
  const std::size_t n = state.n();
  const RMatrix W = weight_or_identity(config.W, n);
  require_weight(W, n);
  if (config.max_iters < 0 || !(config.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad optimizer config");
  if (config.strategy == BasisStrategy::Nagaoka && (config.pair_j >= n || config.pair_k >= n || config.pair_j == config.pair_k))
    throw Error(ErrorCode::OutOfRange, "invalid Nagaoka pair");
  const Constraints cons = make_constraints(state);

  std::vector<CMatrix> X = project_all(cons, canonical_unbiased(state, slds, fisher).X, false);
  const UBasis comp = UBasis::computational(state.dim());

  auto choose = [&](const std::vector<CMatrix>& Xc, UBasis& basis, SignChoice& signs) {
    switch (config.strategy) {
      case BasisStrategy::Holevo:
        basis = comp;
        signs.assign(comp.size(), Orientation::AsIs);
        break;
      case BasisStrategy::Nagaoka: {
        auto al = nagaoka_alignment(with_residuals(Xc, state), state, config.pair_j, config.pair_k);
        basis = std::move(al.basis);
        signs = std::move(al.signs);
        break;
      }
      case BasisStrategy::ExhaustiveComputational: {
        basis = comp;
        const std::size_t m = comp.size();
        SignChoice best(m, Orientation::AsIs);
        double bestv = general_objective(Xc, state, comp, best, W, nullptr);
        if (m <= kExhaustiveMax) {
          for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (m - 1)); ++mask) {
            SignChoice s(m, Orientation::AsIs);
            for (std::size_t q = 1; q < m; ++q)
              if (mask & (std::uint64_t{1} << (q - 1))) s[q] = Orientation::Transposed;
            const double v = general_objective(Xc, state, comp, s, W, nullptr);
            if (v > bestv + 1e-15) {
              bestv = v;
              best = s;
            }
          }
        }
        signs = std::move(best);
        break;
      }
    }
  };

  MinimizeResult res;
  UBasis basis;
  SignChoice signs;
  choose(X, basis, signs);
  double best = general_objective(X, state, basis, signs, W, nullptr);
  std::vector<CMatrix> bestX = X;
  auto residual_of = [&](const std::vector<CMatrix>& Xc) { return with_residuals(Xc, state).max_residual(); };
  res.max_feasibility_residual = residual_of(X);

  constexpr int kWindow = 100;
  for (int t = 1; t <= config.max_iters; ++t) {
    choose(X, basis, signs);
    std::vector<CMatrix> g;
    const double f = general_objective(X, state, basis, signs, W, &g);
    if (f < best) {
      best = f;
      bestX = X;
    }
    g = project_all(cons, g, true);
    double gn = 0.0;
    for (const auto& gj : g) gn += gj.squaredNorm();
    gn = std::sqrt(gn);
    res.iterations = t;
    if (gn < 1e-12) {
      res.trace.push_back(best);
      res.converged = true;
      break;
    }
    const double eta = config.step / std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < n; ++j) X[j] -= (eta / gn) * g[j];
    X = project_all(cons, X, false);
    res.max_feasibility_residual = std::max(res.max_feasibility_residual, residual_of(X));
    res.trace.push_back(best);
    if (t > kWindow) {
      const double prev = res.trace[static_cast<std::size_t>(t - 1 - kWindow)];
      if (prev - best <= config.tol * std::max(1.0, std::abs(best))) {
        res.converged = true;
        break;
      }
    }
  }
  // the final iterate may be the best one
  choose(X, basis, signs);
  const double last = general_objective(X, state, basis, signs, W, nullptr);
  if (last < best) {
    best = last;
    bestX = X;
    if (!res.trace.empty()) res.trace.back() = best;
  }
  res.value = best;
  res.X_opt = with_residuals(std::move(bestX), state);
  return res;
}

}  // namespace qmetro
