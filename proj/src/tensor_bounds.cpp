#include "qmetro/tensor_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

constexpr double kAlignTie = 1e-12;
constexpr std::size_t kExhaustiveMax = 12;

std::size_t checked_power(std::size_t d, int p, std::size_t cap) {
  std::size_t D = 1;
  for (int r = 0; r < p; ++r) {
    if (D > cap / std::max<std::size_t>(d, 1))
      throw Error(ErrorCode::DimensionOverflow, "d^p exceeds dimension cap " + std::to_string(cap));
    D *= d;
  }
  if (D > cap) throw Error(ErrorCode::DimensionOverflow, "d^p exceeds dimension cap " + std::to_string(cap));
  return D;
}

// (I (x) A (x) I) applied to every site r and summed; acc += result.
void apply_site(const CMatrix& a, std::size_t d, int p, int r, const CVector& in, CVector& out) {
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::Index R = 1;
  for (int s = r + 1; s < p; ++s) R *= di;
  Eigen::Index left = 1;
  for (int s = 0; s < r; ++s) left *= di;
  const Eigen::Index block = di * R;
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const CMatrix> X(in.data() + l * block, R, di);
    Eigen::Map<CMatrix> Y(out.data() + l * block, R, di);
    Y.noalias() += X * a.transpose();
  }
}

CVector apply_sum(const CMatrix& a, std::size_t d, int p, const CVector& v) {
  CVector out = CVector::Zero(v.size());
  for (int r = 0; r < p; ++r) apply_site(a, d, p, r, v, out);
  return out;
}

CVector apply_product(const CMatrix& a, std::size_t d, int p, CVector v) {
  for (int r = 0; r < p; ++r) {
    CVector out = CVector::Zero(v.size());
    apply_site(a, d, p, r, v, out);
    v.swap(out);
  }
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::size_t j, std::size_t k) {
  return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(j)) ^ static_cast<std::uint64_t>(k));
}

TradeoffMatrix make_matrix(TradeoffKind kind, int p, std::size_t n, std::string method) {
  TradeoffMatrix t;
  t.kind = kind;
  t.p = p;
  t.entries = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  t.method = std::move(method);
  return t;
}

std::vector<CMatrix> dense_ops(const CollectiveOperators& coll) {
  if (!coll.L_jp.empty()) return coll.L_jp;
  std::vector<CMatrix> out;
  for (const auto& a : coll.single_ops) out.push_back(embed_sum(a, coll.p, coll.dim()));
  return out;
}

CMatrix dense_sqrt_rho_p(const CollectiveOperators& coll) {
  if (coll.sqrt_rho_p.size()) return coll.sqrt_rho_p;
  return kron_power(coll.sqrt_rho, coll.p, coll.dim());
}

struct SpectralData {
  RVector lambda;
  CMatrix psi;
};

SpectralData support_spectrum(const EvaluatedState& state) {
  return {state.support_values(), state.support_vectors()};
}

// c_i^{(jk)} = <Psi_i|[L_j, L_k]|Psi_i> for all pairs j<k
std::vector<std::vector<Complex>> diagonal_commutators(const SpectralData& sp, const std::vector<CMatrix>& ops) {
  const std::size_t n = ops.size();
  std::vector<std::vector<Complex>> c;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      CMatrix K = commutator(ops[j], ops[k]);
      std::vector<Complex> row;
      for (Eigen::Index i = 0; i < sp.psi.cols(); ++i) row.push_back(sp.psi.col(i).dot(K * sp.psi.col(i)));
      c.push_back(std::move(row));
    }
  }
  return c;
}

}  // namespace

Limits limits_from_env(Limits base) {
  if (const char* env = std::getenv("QMETRO_MAX_DIM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw Error(ErrorCode::InvalidArgument, "QMETRO_MAX_DIM must be a positive integer");
    base.max_dim = static_cast<std::size_t>(v);
  }
  return base;
}

std::string to_string(TradeoffKind kind) {
  switch (kind) {
    case TradeoffKind::C: return "C";
    case TradeoffKind::T: return "T";
    case TradeoffKind::C_RLD: return "C_RLD";
    case TradeoffKind::FBAR_IM: return "FBAR_IM";
  }
  return "?";
}

CMatrix embed_sum(const CMatrix& a, int p, std::size_t max_dim) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "embed_sum: p must be >= 1");
  checked_power(static_cast<std::size_t>(a.rows()), p, max_dim);
  const CMatrix I = CMatrix::Identity(a.rows(), a.cols());
  CMatrix S = a;
  CMatrix Iq = I;
  for (int q = 1; q < p; ++q) {
    S = kron(S, I, max_dim) + kron(Iq, a, max_dim);
    Iq = kron(Iq, I, max_dim);
  }
  return S;
}

CollectiveOperators build_collective(const EvaluatedState& state, const std::vector<CMatrix>& ops, int p,
                                     DerivativeKind kind, bool tilded, const Limits& limits) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "build_collective: p must be >= 1");
  const std::size_t D = checked_power(state.dim(), p, limits.max_dim);
  CollectiveOperators c;
  c.p = p;
  c.d = state.dim();
  c.kind = kind;
  c.tilded = tilded;
  c.rho = state.rho;
  c.sqrt_rho = state.sqrt_rho();
  c.single_ops = ops;
  c.rho_p = kron_power(c.rho, p, limits.max_dim);
  // operator lists are materialized only while they stay small
  if (D <= 2048) {
    c.sqrt_rho_p = kron_power(c.sqrt_rho, p, limits.max_dim);
    for (const auto& a : ops) c.L_jp.push_back(embed_sum(a, p, limits.max_dim));
  }
  return c;
}

CMatrix sandwiched_commutator(const CollectiveOperators& coll, std::size_t j, std::size_t k) {
  const CMatrix K = coll.sqrt_rho * commutator(coll.single_ops[j], coll.single_ops[k]) * coll.sqrt_rho;
  CMatrix M = K;
  CMatrix R = coll.rho;
  for (int q = 1; q < coll.p; ++q) {
    M = kron(M, coll.rho, std::numeric_limits<std::size_t>::max()) +
        kron(R, K, std::numeric_limits<std::size_t>::max());
    if (q + 1 < coll.p) R = kron(R, coll.rho, std::numeric_limits<std::size_t>::max());
  }
  return M;
}

UBasis UBasis::computational(std::size_t dim) {
  UBasis b;
  for (std::size_t q = 0; q < dim; ++q) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(q)) = 1.0;
    b.vectors.push_back(std::move(v));
  }
  b.completeness_checked = true;
  return b;
}

UBasis UBasis::from_columns(const CMatrix& columns) {
  UBasis b;
  for (Eigen::Index q = 0; q < columns.cols(); ++q) b.vectors.push_back(columns.col(q));
  return b;
}

void check_completeness(UBasis& basis, double tol) {
  if (basis.vectors.empty()) throw Error(ErrorCode::IncompleteBasis, "empty basis");
  const Eigen::Index D = basis.vectors.front().size();
  CMatrix S = CMatrix::Zero(D, D);
  for (const auto& v : basis.vectors) {
    if (v.size() != D) throw Error(ErrorCode::DimMismatch, "basis vectors differ in length");
    S.noalias() += v * v.adjoint();
  }
  double resid = (S - CMatrix::Identity(D, D)).cwiseAbs().maxCoeff();
  if (resid > tol)
    throw Error(ErrorCode::IncompleteBasis, "sum |u><u| differs from identity by " + std::to_string(resid));
  basis.completeness_checked = true;
}

UBasis rho_eigenbasis(const CollectiveOperators& coll) {
  EigenSystem es = eigh(coll.rho);
  UBasis b = UBasis::from_columns(es.vectors);
  for (int q = 1; q < coll.p; ++q) {
    UBasis next;
    for (const auto& u : b.vectors)
      for (Eigen::Index i = 0; i < es.vectors.cols(); ++i) next.vectors.push_back(kron(u, CVector(es.vectors.col(i))));
    b = std::move(next);
  }
  b.completeness_checked = true;  // product of orthonormal bases
  return b;
}

UBasis commutator_eigenbasis(const CollectiveOperators& coll, std::size_t j, std::size_t k) {
  CMatrix M = sandwiched_commutator(coll, j, k);
  CMatrix H = hermitian_part(Complex(0.0, -1.0) * M);
  UBasis b = UBasis::from_columns(eigh(H).vectors);
  b.completeness_checked = true;  // unitary eigenvector matrix
  return b;
}

TradeoffMatrix compute_Cp(const CollectiveOperators& coll) {
  TradeoffMatrix t = make_matrix(TradeoffKind::C, coll.p, coll.n(), "site-sum sandwich, trace norm");
  t.tilded = coll.tilded;
  for (std::size_t j = 0; j < coll.n(); ++j) {
    for (std::size_t k = j + 1; k < coll.n(); ++k) {
      double v = 0.5 * trace_norm(sandwiched_commutator(coll, j, k));
      t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
      t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return t;
}

TradeoffMatrix compute_Cp_dense(const CollectiveOperators& coll) {
  TradeoffMatrix t = make_matrix(TradeoffKind::C, coll.p, coll.n(), "dense collective operators, trace norm");
  t.tilded = coll.tilded;
  const auto ops = dense_ops(coll);
  const CMatrix s = dense_sqrt_rho_p(coll);
  for (std::size_t j = 0; j < coll.n(); ++j) {
    for (std::size_t k = j + 1; k < coll.n(); ++k) {
      double v = 0.5 * trace_norm(s * commutator(ops[j], ops[k]) * s);
      t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
      t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return t;
}

TradeoffMatrix compute_Cp_rld(const CollectiveOperators& coll) {
  if (coll.kind != DerivativeKind::RLD) throw Error(ErrorCode::KindMismatch, "compute_Cp_rld needs RLD operators");
  TradeoffMatrix t = make_matrix(TradeoffKind::C_RLD, coll.p, coll.n(), "dense RLD products, clipped at 2p");
  t.tilded = coll.tilded;
  const auto ops = dense_ops(coll);
  const CMatrix s = dense_sqrt_rho_p(coll);
  const double cap = 2.0 * coll.p;
  for (std::size_t j = 0; j < coll.n(); ++j) {
    for (std::size_t k = j + 1; k < coll.n(); ++k) {
      CMatrix M = s * (ops[j] * ops[k].adjoint() - ops[k] * ops[j].adjoint()) * s;
      double v = std::min(0.5 * trace_norm(M), cap);
      t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
      t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return t;
}

double composition_count(int p, std::size_t m) {
  if (m == 0) return 0.0;
  // C(p+m-1, m-1) in floating point
  return std::round(std::exp(std::lgamma(p + static_cast<double>(m)) - std::lgamma(p + 1.0) -
                             std::lgamma(static_cast<double>(m))));
}

TradeoffMatrix compute_Tp_exact(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds, int p,
                                const Limits& limits) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "compute_Tp_exact: p must be >= 1");
  const SpectralData sp = support_spectrum(state);
  const auto m = static_cast<std::size_t>(sp.lambda.size());
  if (composition_count(p, m) > static_cast<double>(limits.max_enumeration))
    throw Error(ErrorCode::EnumerationOverflow, "occupation vectors exceed enumeration cap");
  const auto c = diagonal_commutators(sp, tilde_slds);
  const std::size_t n = tilde_slds.size();
  std::vector<double> sums(c.size(), 0.0);

  std::vector<double> log_lambda(m), log_fact(static_cast<std::size_t>(p) + 1);
  for (std::size_t i = 0; i < m; ++i) log_lambda[i] = std::log(sp.lambda(static_cast<Eigen::Index>(i)));
  for (int q = 0; q <= p; ++q) log_fact[static_cast<std::size_t>(q)] = std::lgamma(q + 1.0);

  // weak compositions of p into m parts, from (p,0,..,0) to (0,..,0,p)
  std::vector<int> k(m, 0);
  k[0] = p;
  while (true) {
    double lw = log_fact[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < m; ++i)
      if (k[i] > 0) lw += k[i] * log_lambda[i] - log_fact[static_cast<std::size_t>(k[i])];
    const double w = std::exp(lw);
    for (std::size_t pair = 0; pair < c.size(); ++pair) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += static_cast<double>(k[i]) * c[pair][i];
      sums[pair] += w * std::abs(s);
    }
    if (k[m - 1] == p) break;
    const int tail = k[m - 1];
    k[m - 1] = 0;
    std::size_t h = m - 2;
    while (k[h] == 0) --h;
    k[h] -= 1;
    k[h + 1] = tail + 1;
  }

  TradeoffMatrix t = make_matrix(TradeoffKind::T, p, n, "exact occupation-vector enumeration");
  std::size_t pair = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t kk = j + 1; kk < n; ++kk, ++pair) {
      t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(kk)) = 0.5 * sums[pair];
      t.entries(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(j)) = 0.5 * sums[pair];
    }
  return t;
}

TradeoffMatrix compute_Tp_monte_carlo(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds, int p,
                                      std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "compute_Tp_monte_carlo: samples must be >= 1");
  if (p < 1) throw Error(ErrorCode::OutOfRange, "compute_Tp_monte_carlo: p must be >= 1");
  const SpectralData sp = support_spectrum(state);
  const auto m = static_cast<std::size_t>(sp.lambda.size());
  std::vector<double> cdf(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) cdf[i] = (acc += sp.lambda(static_cast<Eigen::Index>(i)));
  for (auto& v : cdf) v /= acc;
  const auto c = diagonal_commutators(sp, tilde_slds);
  const std::size_t n = tilde_slds.size();

  TradeoffMatrix t = make_matrix(TradeoffKind::T, p, n,
                                 "monte carlo, samples=" + std::to_string(samples) + ", seed=" + std::to_string(seed));
  t.std_error = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t pair = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k, ++pair) {
      std::mt19937_64 rng(derive_seed(seed, j, k));
      double mean = 0.0, m2 = 0.0;
      for (std::size_t s = 0; s < samples; ++s) {
        Complex sum = 0.0;
        for (int r = 0; r < p; ++r) {
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
          std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), m - 1);
          sum += c[pair][idx];
        }
        const double x = std::abs(sum);
        const double delta = x - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
      }
      const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
      const auto J = static_cast<Eigen::Index>(j), K = static_cast<Eigen::Index>(k);
      t.entries(J, K) = t.entries(K, J) = 0.5 * mean;
      t.std_error(J, K) = t.std_error(K, J) = 0.5 * std::sqrt(var / static_cast<double>(samples));
    }
  }
  return t;
}

std::vector<CMatrix> compute_Fu(const CollectiveOperators& coll, const UBasis& basis) {
  const std::size_t n = coll.n();
  std::vector<CMatrix> adj;
  for (const auto& a : coll.single_ops) adj.push_back(a.adjoint());
  std::vector<CMatrix> out;
  out.reserve(basis.size());
  for (const auto& u : basis.vectors) {
    if (static_cast<std::size_t>(u.size()) != coll.dim())
      throw Error(ErrorCode::DimMismatch, "basis vector length differs from d^p");
    const CVector v = apply_product(coll.sqrt_rho, coll.d, coll.p, u);
    std::vector<CVector> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = apply_sum(adj[j], coll.d, coll.p, v);
      b[j] = apply_sum(coll.single_ops[j], coll.d, coll.p, v);
    }
    CMatrix F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) F(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = a[j].dot(b[k]);
    out.push_back(std::move(F));
  }
  return out;
}

namespace {

TradeoffMatrix fbar_from(const CollectiveOperators& coll, const std::vector<CMatrix>& Fu, const SignChoice& signs,
                         std::string method) {
  TradeoffMatrix t = make_matrix(TradeoffKind::FBAR_IM, coll.p, coll.n(), std::move(method));
  t.tilded = coll.tilded;
  RMatrix acc = RMatrix::Zero(static_cast<Eigen::Index>(coll.n()), static_cast<Eigen::Index>(coll.n()));
  for (std::size_t q = 0; q < Fu.size(); ++q) {
    RMatrix im = Fu[q].imag();
    acc += signs[q] == Orientation::AsIs ? im : RMatrix(-im);
  }
  t.entries = 0.5 * (acc - acc.transpose());
  return t;
}

std::vector<RMatrix> normalized_imag(const std::vector<CMatrix>& Fu, const RMatrix& N) {
  std::vector<RMatrix> out;
  for (const auto& F : Fu) {
    RMatrix im = F.imag();
    im = 0.5 * (im - im.transpose());
    out.push_back(N * im * N);
  }
  return out;
}

}  // namespace

TradeoffMatrix compute_Fbar_im(const CollectiveOperators& coll, UBasis basis, const SignChoice& signs) {
  if (!basis.completeness_checked) check_completeness(basis);
  if (signs.size() != basis.size())
    throw Error(ErrorCode::DimMismatch, "sign choice length differs from basis size");
  return fbar_from(coll, compute_Fu(coll, basis), signs, "user basis and signs");
}

TradeoffMatrix compute_Fbar_im(const CollectiveOperators& coll, AutoAlign align) {
  if (align.j >= coll.n() || align.k >= coll.n() || align.j == align.k)
    throw Error(ErrorCode::OutOfRange, "AutoAlign: invalid pair");
  UBasis basis = commutator_eigenbasis(coll, align.j, align.k);
  const auto Fu = compute_Fu(coll, basis);
  SignChoice signs;
  for (const auto& F : Fu) {
    const double a = F(static_cast<Eigen::Index>(align.j), static_cast<Eigen::Index>(align.k)).imag();
    signs.push_back(a >= -kAlignTie ? Orientation::AsIs : Orientation::Transposed);
  }
  return fbar_from(coll, Fu, signs,
                   "auto-aligned eigenbasis for pair (" + std::to_string(align.j + 1) + "," +
                       std::to_string(align.k + 1) + ")");
}

FbarSearch optimize_Fbar_im(const CollectiveOperators& coll, UBasis basis, const RMatrix& normalizer) {
  if (!basis.completeness_checked) check_completeness(basis);
  const auto Fu = compute_Fu(coll, basis);
  const auto J = normalized_imag(Fu, normalizer);
  const std::size_t m = J.size();
  const auto n = static_cast<Eigen::Index>(coll.n());
  FbarSearch out;
  SignChoice signs(m, Orientation::AsIs);

  if (m <= kExhaustiveMax) {
    // Gray-code walk over 2^(m-1) choices; the first vector stays AsIs (global flip is norm-neutral)
    RMatrix S = RMatrix::Zero(n, n);
    for (const auto& j : J) S += j;
    std::vector<int> sgn(m, 1);
    double best = S.squaredNorm();
    std::vector<int> best_sgn = sgn;
    const std::uint64_t total = m > 0 ? (std::uint64_t{1} << (m - 1)) : 1;
    for (std::uint64_t g = 1; g < total; ++g) {
      const int bit = __builtin_ctzll(g);
      const std::size_t q = static_cast<std::size_t>(bit) + 1;
      S -= 2.0 * sgn[q] * J[q];
      sgn[q] = -sgn[q];
      const double v = S.squaredNorm();
      if (v > best + 1e-15) {
        best = v;
        best_sgn = sgn;
      }
    }
    for (std::size_t q = 0; q < m; ++q) signs[q] = best_sgn[q] > 0 ? Orientation::AsIs : Orientation::Transposed;
    out.exhaustive = true;
  } else {
    std::vector<int> sgn(m, 1);
    RMatrix S = RMatrix::Zero(n, n);
    for (const auto& j : J) S += j;
    double cur = S.squaredNorm();
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t q = 0; q < m; ++q) {
        RMatrix trial = S - 2.0 * sgn[q] * J[q];
        const double v = trial.squaredNorm();
        if (v > cur * (1.0 + 1e-12) + 1e-15) {
          S = std::move(trial);
          cur = v;
          sgn[q] = -sgn[q];
          improved = true;
        }
      }
    }
    for (std::size_t q = 0; q < m; ++q) signs[q] = sgn[q] > 0 ? Orientation::AsIs : Orientation::Transposed;
  }
  out.fbar = fbar_from(coll, Fu, signs, out.exhaustive ? "exhaustive sign search" : "greedy sign ascent");
  out.signs = std::move(signs);
  return out;
}

TradeoffMatrix best_Fbar_im(const CollectiveOperators& coll, const RMatrix& normalizer) {
  auto score = [&](const TradeoffMatrix& t) {
    return (normalizer * t.entries * normalizer).squaredNorm();
  };
  TradeoffMatrix best = optimize_Fbar_im(coll, UBasis::computational(coll.dim()), normalizer).fbar;
  best.method = "computational basis, " + best.method;
  auto consider = [&](TradeoffMatrix cand) {
    if (score(cand) > score(best) + 1e-12) best = std::move(cand);
  };
  {
    TradeoffMatrix t = optimize_Fbar_im(coll, rho_eigenbasis(coll), normalizer).fbar;
    t.method = "rho eigenbasis, " + t.method;
    consider(std::move(t));
  }
  for (std::size_t j = 0; j < coll.n(); ++j)
    for (std::size_t k = j + 1; k < coll.n(); ++k) consider(compute_Fbar_im(coll, AutoAlign{j, k}));
  return best;
}

TradeoffMatrix limit_Fim(const EvaluatedState& state, const std::vector<CMatrix>& tilde_slds) {
  const std::size_t n = tilde_slds.size();
  TradeoffMatrix t = make_matrix(TradeoffKind::C, 0, n, "limit 1/2|Tr(rho[L_j,L_k])|");
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double v = 0.5 * std::abs((state.rho * commutator(tilde_slds[j], tilde_slds[k])).trace());
      t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
      t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
    }
  return t;
}

}  // namespace qmetro
