#include "qmetro/acceptance.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qmetro/error.hpp"
#include "qmetro/gamma_bounds.hpp"
#include "qmetro/log_derivatives.hpp"
#include "qmetro/random.hpp"
#include "qmetro/scenarios.hpp"
#include "qmetro/state.hpp"
#include "qmetro/tensor_bounds.hpp"
#include "qmetro/variational.hpp"

namespace qmetro {

namespace {

class Checker {
 public:
  explicit Checker(const CheckOptions& o) : scale_(o.tol_scale) {}

  void close(double got, double want, double tol, const std::string& what) {
    const double err = std::abs(got - want);
    worst_ = std::max(worst_, err);
    record(scale_ >= 0 && err <= tol * scale_, what + ": got " + fmt(got) + ", want " + fmt(want));
  }
  // a >= b - slack
  void ge(double a, double b, double slack, const std::string& what) {
    record(scale_ >= 0 && a >= b - slack * scale_, what + ": " + fmt(a) + " < " + fmt(b));
  }
  void le(double a, double b, double slack, const std::string& what) {
    record(scale_ >= 0 && a <= b + slack * scale_, what + ": " + fmt(a) + " > " + fmt(b));
  }
  void truth(bool ok, const std::string& what) { record(scale_ >= 0 && ok, what); }

  CriterionResult result(const std::string& extra = {}) const {
    CriterionResult r;
    r.pass = fails_ == 0 && count_ > 0;
    std::ostringstream s;
    s << count_ << " checks";
    if (fails_) s << ", " << fails_ << " failed; first: " << first_;
    else s << ", max abs err " << std::setprecision(3) << worst_;
    if (scale_ < 0) s << " (negative tolerance scale)";
    if (!extra.empty()) s << "; " << extra;
    r.detail = s.str();
    return r;
  }

  static std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(15) << v;
    return s.str();
  }

 private:
  void record(bool ok, const std::string& what) {
    ++count_;
    if (!ok && fails_++ == 0) first_ = what;
  }
  double scale_;
  int count_ = 0;
  int fails_ = 0;
  double worst_ = 0.0;
  std::string first_;
};

Analysis preset(const std::string& id, double delta) {
  StateFamily fam = build_scenario(ScenarioSpec::parse(id, delta));
  return analyze(evaluate(fam, RVector::Zero(static_cast<Eigen::Index>(fam.n()))));
}

CollectiveOperators coll_of(const Analysis& a, int p) {
  return build_collective(a.state, a.fisher.tilde_ops, p);
}

double cp_at(const Analysis& a, int p) { return cp_bound(compute_Cp(coll_of(a, p)), a.fisher.n(), p); }
double cp_dense_at(const Analysis& a, int p) { return cp_bound(compute_Cp_dense(coll_of(a, p)), a.fisher.n(), p); }
double tp_at(const Analysis& a, int p) {
  return tp_bound(compute_Tp_exact(a.state, a.fisher.tilde_ops, p), a.fisher.n(), p);
}
double fbar_at(const Analysis& a, int p, FBranch branch = FBranch::Max) {
  const auto n = static_cast<Eigen::Index>(a.fisher.n());
  TradeoffMatrix F = best_Fbar_im(coll_of(a, p), RMatrix::Identity(n, n));
  return fbar_bound(F, a.fisher, a.fisher.n(), p, branch);
}

// Full-rank state with n random traceless derivative directions.
Analysis random_analysis(std::size_t d, std::size_t n, Rng& rng) {
  for (;;) {
    CMatrix rho = random_density(d, rng);
    std::vector<CMatrix> derivs;
    for (std::size_t j = 0; j < n; ++j) derivs.push_back(random_traceless_hermitian(d, rng));
    try {
      return analyze(make_state(rho, derivs));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularQfim) throw;
    }
  }
}

RMatrix random_nonsingular(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    RMatrix A(n, n);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = g(rng);
    Eigen::JacobiSVD<RMatrix> svd(A);
    if (svd.singularValues().minCoeff() > 0.2) return A;
  }
}

std::vector<CMatrix> reparam(const std::vector<CMatrix>& d, const RMatrix& A) {
  std::vector<CMatrix> out;
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    CMatrix m = CMatrix::Zero(d[0].rows(), d[0].cols());
    for (Eigen::Index j = 0; j < A.rows(); ++j) m += A(j, k) * d[static_cast<std::size_t>(j)];
    out.push_back(m);
  }
  return out;
}

CriterionResult crit1(const CheckOptions& o) {
  Checker c(o);
  for (double d : {0.0, 0.3, 0.6, 0.9}) {
    Analysis a = preset("qubit3", d);
    const std::string at = " at delta=" + Checker::fmt(d);
    c.close(cp_at(a, 1), 9.0 / 4.0, 1e-10, "cp" + at);
    c.close(tp_at(a, 1), 11.0 / 4.0, 1e-10, "tp" + at);
    c.close(fbar_at(a, 1), 5.0 / 2.0, 1e-10, "fbar" + at);
  }
  return c.result();
}

CriterionResult crit2(const CheckOptions& o) {
  Checker c(o);
  for (int i = 0; i < 10; ++i) {
    const double d = 0.1 * i;
    Analysis a = preset("qubit3", d);
    const std::string at = " at delta=" + Checker::fmt(d);
    c.close(cp_at(a, 2), qubit_C2_bound(d), 1e-9, "cp" + at);
    c.close(tp_at(a, 2), qubit_T2_bound(d), 1e-9, "tp" + at);
    c.close(fbar_at(a, 2), qubit_Fbar2_bound(d), 1e-9, "fbar" + at);
  }
  return c.result();
}

CriterionResult crit3(const CheckOptions& o) {
  Checker c(o);
  Analysis a = preset("qubit3", 0.0);
  double prev = -1.0;
  for (int p = 1; p <= 10; ++p) {
    const double v = cp_dense_at(a, p);
    const double r = qubit_Np(p) / p;
    c.close(v, 3.0 - 0.75 * r * r, 1e-9, "dense cp p=" + std::to_string(p));
    c.ge(v, prev, 1e-9, "non-decreasing at p=" + std::to_string(p));
    c.truth(v < 3.0, "cp < 3 at p=" + std::to_string(p));
    prev = v;
  }
  return c.result();
}

CriterionResult crit4(const CheckOptions& o) {
  Checker c(o);
  struct Case {
    std::string id;
    std::vector<double> want;
  };
  const std::vector<Case> cases{
      {"qutrit8", {50.0 / 7.0, 160.0 / 21.0, 1462.0 / 189.0}},
      {"qutrit:1,2,5", {21.0 / 8.0, 17.0 / 6.0}},
      {"qutrit:1,2", {3.0 / 2.0, 16.0 / 9.0, 299.0 / 162.0}},
      {"qutrit:1,2,4,5", {7.0 / 2.0, 34.0 / 9.0, 623.0 / 162.0}},
  };
  for (const auto& cs : cases) {
    Analysis a = preset(cs.id, 0.0);
    for (std::size_t i = 0; i < cs.want.size(); ++i) {
      const int p = static_cast<int>(i + 1);
      const std::string at = cs.id + " p=" + std::to_string(p);
      const double v = cp_at(a, p);
      c.close(v, cs.want[i], 1e-9, "cp " + at);
      c.close(cp_dense_at(a, p), v, 1e-8, "dense cross-check " + at);
    }
  }
  return c.result();
}

CriterionResult crit5(const CheckOptions& o) {
  Checker c(o);
  Analysis a125 = preset("qutrit:1,2,5", 0.0);
  c.close(fbar_at(a125, 2), 3.0 - 2.0 / 9.0, 1e-9, "fbar qutrit:1,2,5 p=2");
  Analysis a1245 = preset("qutrit:1,2,4,5", 0.0);
  c.close(fbar_at(a1245, 1), 28.0 / 9.0, 1e-9, "fbar qutrit:1,2,4,5 p=1");
  c.close(fbar_at(a1245, 2), 4.0 - 32.0 / 81.0, 1e-9, "fbar qutrit:1,2,4,5 p=2");
  Analysis a8 = preset("qutrit8", 0.0);
  // the printed n = 8 value uses the (n-2)/(n-1)^2 branch of f(n)
  c.close(fbar_at(a8, 1, FBranch::Correlated), 8.0 - 24.0 / 49.0, 1e-9, "fbar qutrit8 p=1, correlated branch");
  const double dflt = fbar_at(a8, 1);
  return c.result("qutrit8 with default f(8)=" + Checker::fmt(f_of_n(8)) + " gives " + Checker::fmt(dflt));
}

void monotone_checks(Checker& c, const Analysis& a, const std::string& tag) {
  const auto n = static_cast<Eigen::Index>(a.fisher.n());
  const TradeoffMatrix lim = limit_Fim(a.state, a.fisher.tilde_ops);
  RMatrix prev;
  for (int p = 1; p <= 6; ++p) {
    const RMatrix C = compute_Cp(coll_of(a, p)).entries / p;
    const RMatrix T = compute_Tp_exact(a.state, a.fisher.tilde_ops, p).entries / p;
    const std::string at = tag + " p=" + std::to_string(p);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        if (j == k) continue;
        if (prev.size()) c.le(C(j, k), prev(j, k), 1e-9, "C_p/p increases " + at);
        c.le(lim.entries(j, k), T(j, k), 1e-9, "limit > T_p/p " + at);
        c.le(T(j, k), C(j, k), 1e-9, "T_p/p > C_p/p " + at);
      }
    prev = C;
  }
}

CriterionResult crit6(const CheckOptions& o) {
  Checker c(o);
  monotone_checks(c, preset("qubit3", 0.0), "qubit3 delta=0");
  monotone_checks(c, preset("qubit3", 0.5), "qubit3 delta=0.5");
  monotone_checks(c, preset("qutrit8", 0.0), "qutrit8 delta=0");
  monotone_checks(c, preset("qutrit8", 0.2), "qutrit8 delta=0.2");
  Rng rng(6);
  for (std::size_t d : {2, 3})
    for (std::size_t n : {2, 3})
      for (int rep = 0; rep < 3; ++rep)
        monotone_checks(c, random_analysis(d, n, rng),
                        "random d=" + std::to_string(d) + " n=" + std::to_string(n));
  return c.result();
}

CriterionResult crit7(const CheckOptions& o) {
  Checker c(o);
  Analysis a = preset("qubit3", 0.5);
  const auto n = static_cast<Eigen::Index>(a.fisher.n());
  const RMatrix lim = limit_Fim(a.state, a.fisher.tilde_ops).entries;
  c.close(lim(0, 1), 0.5, 1e-12, "limit entry (1,2)");
  RMatrix pc, pt;
  for (int p = 1; p <= 8; ++p) {
    const RMatrix C = compute_Cp(coll_of(a, p)).entries / p;
    const RMatrix T = compute_Tp_exact(a.state, a.fisher.tilde_ops, p).entries / p;
    const std::string at = " p=" + std::to_string(p);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        const std::string e = " (" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")" + at;
        c.ge(C(j, k), lim(j, k), 1e-9, "C_p/p below limit" + e);
        c.ge(T(j, k), lim(j, k), 1e-9, "T_p/p below limit" + e);
        if (pc.size()) {
          c.le(std::abs(C(j, k) - T(j, k)), std::abs(pc(j, k) - pt(j, k)), 1e-9, "|C-T| grows" + e);
          c.le(C(j, k), pc(j, k), 1e-9, "C_p/p not monotone" + e);
          c.le(T(j, k), pt(j, k), 1e-9, "T_p/p not monotone" + e);
        }
      }
    pc = C;
    pt = T;
  }
  std::ostringstream s;
  s << "p=8 gaps to limit: C " << std::setprecision(4) << pc(0, 1) - lim(0, 1) << ", T " << pt(0, 1) - lim(0, 1);
  return c.result(s.str());
}

CriterionResult crit8(const CheckOptions& o) {
  Checker c(o);
  Rng rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    const std::size_t outcomes = d + static_cast<std::size_t>(trial % 4);
    CMatrix rho = random_density(d, rng);
    std::vector<CMatrix> derivs;
    for (std::size_t j = 0; j < n; ++j) derivs.push_back(random_traceless_hermitian(d, rng));
    EvaluatedState st = make_state(rho, derivs);
    LocalMeasurement meas;
    meas.elements = random_povm(d, outcomes, rng);
    for (std::size_t a = 0; a < outcomes; ++a) {
      RVector e(static_cast<Eigen::Index>(n));
      for (Eigen::Index j = 0; j < e.size(); ++j) e(j) = g(rng);
      meas.estimates.push_back(e);
    }
    const RVector x0 = RVector::Zero(static_cast<Eigen::Index>(n));
    LocallyUnbiasedSet X = observables_from_measurement(meas, x0, st);
    DerivativeSet slds = compute_sld(st);
    UBasis basis = UBasis::from_columns(random_unitary(d, rng));
    SignChoice signs(d, Orientation::AsIs);
    PairMatrices pm = pair_matrices(X, slds, st, basis, signs);
    RMatrix sum = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t q = 0; q < basis.size(); ++q) {
      const RMatrix cu = cov_u(meas, x0, st, basis.vectors[q]);
      sum += cu;
      const double mineig = eigvalsh(CMatrix(cu.cast<Complex>() - pm.A_u[q])).minCoeff();
      c.ge(mineig, 0.0, 1e-9, "Cov_u - A_u not PSD, trial " + std::to_string(trial));
    }
    c.le((sum - covariance(meas, x0, st)).cwiseAbs().maxCoeff(), 0.0, 1e-9,
         "sum of Cov_u differs from Cov, trial " + std::to_string(trial));
  }
  return c.result();
}

CriterionResult crit9(const CheckOptions& o) {
  Checker c(o);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    Analysis a = random_analysis(d, n, rng);
    LocallyUnbiasedSet X = canonical_unbiased(a.state, a.slds, a.fisher);
    const RMatrix W = random_spd(n, rng);
    const UBasis comp = UBasis::computational(d);
    const SignChoice asis(d, Orientation::AsIs);
    const double g = evaluate_general_bound(X, a.state, comp, asis, W);
    const std::string t = " trial " + std::to_string(trial);
    c.close(g, holevo_functional(X, a.state, W), 1e-10, "AsIs vs Holevo functional" + t);
    const RMatrix I = RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    AlignedBasis al = nagaoka_alignment(X, a.state, 0, 1);
    if (n == 2)
      c.ge(evaluate_general_bound(X, a.state, al.basis, al.signs, I),
           evaluate_general_bound(X, a.state, comp, asis, I), 1e-9, "Nagaoka below AsIs" + t);
    c.le(evaluate_general_bound(X, a.state, comp, asis, a.fisher.F_Q), 2.0 * static_cast<double>(n), 0.0,
         "canonical objective above 2n" + t);
  }
  return c.result();
}

CriterionResult crit10(const CheckOptions& o) {
  Checker c(o);
  Rng rng(10);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 3 + static_cast<std::size_t>(trial % 2);
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    RVector w(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = u(rng);
    w /= w.sum();
    std::vector<CMatrix> derivs;
    for (std::size_t j = 0; j < n; ++j) {
      RVector v(static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
      v.array() -= v.mean();
      derivs.push_back(v.cast<Complex>().asDiagonal());
    }
    Analysis a = analyze(make_state(w.cast<Complex>().asDiagonal(), derivs));
    for (int p : {1, 2, 3}) {
      BoundReport rep = build_report(a, p);
      const std::string t = " trial " + std::to_string(trial) + " p=" + std::to_string(p);
      c.truth(rep.saturation.partial_commutative && rep.saturation.weak_commutative, "classical flags" + t);
      int uppers = 0;
      for (const auto& e : rep.entries) {
        if (e.kind != BoundKind::Upper) continue;
        ++uppers;
        c.close(e.value, static_cast<double>(n), 1e-8, e.name + t);
      }
      c.truth(uppers >= 5, "missing upper bounds" + t);
    }
  }
  BoundReport q = build_report(preset("qubit3", 0.0), 1);
  c.truth(!q.saturation.partial_commutative && q.saturation.weak_commutative, "qubit3 delta=0 p=1 flags");
  return c.result();
}

CriterionResult crit11(const CheckOptions& o) {
  Checker c(o);
  Rng rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dim(rng);
    const CMatrix m = random_ginibre(d, d, rng);
    const double tn = trace_norm(m);
    const double diag = m.diagonal().cwiseAbs().sum();
    const double rows = m.rowwise().norm().sum();
    c.le(diag, tn, 1e-10, "diagonal sum above trace norm, trial " + std::to_string(trial));
    c.le(tn, rows, 1e-10, "trace norm above row-norm sum, trial " + std::to_string(trial));
  }
  return c.result();
}

CriterionResult crit12(const CheckOptions& o) {
  Checker c(o);
  Rng rng(12);
  // the three-direction qubit family is rotation covariant only at delta = 0
  const auto s = pauli();
  const std::vector<CMatrix> gens{0.5 * s[0], 0.5 * s[1], 0.5 * s[2]};
  const CMatrix rho = 0.5 * CMatrix::Identity(2, 2);
  Analysis base = analyze(make_state(rho, gens));
  // pure family exp(-i(x1 s1 + x2 s2)/2)|0>
  CMatrix psi = CMatrix::Zero(2, 2);
  psi(0, 0) = 1.0;
  const Complex I(0.0, 1.0);
  const std::vector<CMatrix> pure_d{-0.5 * I * commutator(s[0], psi), -0.5 * I * commutator(s[1], psi)};
  Analysis pure = analyze(make_state(psi, pure_d));
  const double pb = pure_state_bound(pure.fisher);
  for (int trial = 0; trial < 5; ++trial) {
    const RMatrix A = random_nonsingular(3, rng);
    Analysis r = analyze(make_state(rho, reparam(gens, A)));
    const std::string t = " trial " + std::to_string(trial);
    for (int p : {1, 2, 3}) {
      c.close(cp_at(r, p), cp_at(base, p), 1e-7, "cp p=" + std::to_string(p) + t);
      c.close(tp_at(r, p), tp_at(base, p), 1e-7, "tp p=" + std::to_string(p) + t);
    }
    const RMatrix B = random_nonsingular(2, rng);
    Analysis rp = analyze(make_state(psi, reparam(pure_d, B)));
    c.close(pure_state_bound(rp.fisher), pb, 1e-7, "pure" + t);
  }
  return c.result();
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list{
      {1, "qubit p=1 bounds", true, crit1},
      {2, "qubit p=2 closed forms", true, crit2},
      {3, "qubit delta=0 dense cp sequence", true, crit3},
      {4, "qutrit cp values", true, crit4},
      {5, "qutrit fbar values", true, crit5},
      {6, "monotonicity", false, crit6},
      {7, "convergence to limit", false, crit7},
      {8, "Cov_u dominates A_u", false, crit8},
      {9, "variational reductions", false, crit9},
      {10, "saturation logic", false, crit10},
      {11, "trace-norm sandwich", false, crit11},
      {12, "reparametrization invariance", false, crit12},
  };
  return list;
}

int run_acceptance(const CheckOptions& opts, std::ostream& out) {
  int failures = 0;
  for (const auto& cr : acceptance_criteria()) {
    if (opts.only_printed && !cr.printed_values) continue;
    CriterionResult r;
    try {
      r = cr.run(opts);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    out << (r.pass ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.name << ": " << r.detail << "\n";
    out.flush();
  }
  return failures;
}

}  // namespace qmetro
