#include "qmetro/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

constexpr Complex I_(0.0, 1.0);

CMatrix mat3(std::initializer_list<Complex> v) {
  CMatrix m(3, 3);
  auto it = v.begin();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = *it++;
  return m;
}

std::vector<double> trinomial_row(int p) {
  std::vector<double> row{1.0};
  for (int q = 0; q < p; ++q) {
    std::vector<double> next(row.size() + 2, 0.0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] += row[i];
      next[i + 1] += row[i];
      next[i + 2] += row[i];
    }
    row.swap(next);
  }
  return row;
}

double log_binom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

ScenarioSpec ScenarioSpec::parse(std::string_view id, double delta) {
  ScenarioSpec s;
  s.delta = delta;
  if (id == "qubit3") {
    s.id = ScenarioId::Qubit3;
  } else if (id == "qutrit8") {
    s.id = ScenarioId::Qutrit;
    s.subset = {1, 2, 3, 4, 5, 6, 7, 8};
  } else if (id.substr(0, 7) == "qutrit:") {
    s.id = ScenarioId::Qutrit;
    std::string_view rest = id.substr(7);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view tok = rest.substr(0, comma);
      int v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw Error(ErrorCode::InvalidSpec, "bad qutrit subset token '" + std::string(tok) + "'");
      s.subset.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  } else {
    throw Error(ErrorCode::InvalidSpec, "unknown scenario '" + std::string(id) + "'");
  }
  s.validate();
  return s;
}

void ScenarioSpec::validate() const {
  if (!std::isfinite(delta)) throw Error(ErrorCode::InvalidSpec, "delta must be finite");
  if (id == ScenarioId::Qubit3) {
    if (std::abs(delta) >= 1.0) throw Error(ErrorCode::InvalidSpec, "qubit3 needs |delta| < 1");
    return;
  }
  if (subset.size() < 2) throw Error(ErrorCode::InvalidSpec, "qutrit subset needs at least two directions");
  std::set<int> seen;
  for (int j : subset) {
    if (j < 1 || j > 8) throw Error(ErrorCode::InvalidSpec, "qutrit direction out of range 1..8");
    if (!seen.insert(j).second) throw Error(ErrorCode::InvalidSpec, "repeated qutrit direction");
  }
  // eigenvalues 1/3 +- delta/2 must stay positive
  if (std::abs(delta) >= 2.0 / 3.0) throw Error(ErrorCode::InvalidSpec, "qutrit needs |delta| < 2/3");
}

std::string ScenarioSpec::name() const {
  if (id == ScenarioId::Qubit3) return "qubit3";
  if (subset == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}) return "qutrit8";
  std::string s = "qutrit:";
  for (std::size_t i = 0; i < subset.size(); ++i) s += (i ? "," : "") + std::to_string(subset[i]);
  return s;
}

std::array<CMatrix, 3> pauli() {
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I_, I_, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

std::array<CMatrix, 8> gell_mann() {
  const double r3 = 1.0 / std::sqrt(3.0);
  return {
      mat3({0, 1, 0, 1, 0, 0, 0, 0, 0}),
      mat3({0, -I_, 0, I_, 0, 0, 0, 0, 0}),
      mat3({1, 0, 0, 0, -1, 0, 0, 0, 0}),
      mat3({0, 0, 1, 0, 0, 0, 1, 0, 0}),
      mat3({0, 0, -I_, 0, 0, 0, I_, 0, 0}),
      mat3({0, 0, 0, 0, 0, 1, 0, 1, 0}),
      mat3({0, 0, 0, 0, 0, -I_, 0, I_, 0}),
      mat3({r3, 0, 0, 0, r3, 0, 0, 0, -2.0 * r3}),
  };
}

StateFamily build_scenario(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.id == ScenarioId::Qubit3) {
    auto s = pauli();
    CMatrix rho0 = 0.5 * (CMatrix::Identity(2, 2) + spec.delta * s[2]);
    return StateFamily::linear(rho0, {0.5 * s[0], 0.5 * s[1], 0.5 * s[2]}, {"x1", "x2", "x3"});
  }
  auto g = gell_mann();
  CMatrix rho0 = CMatrix::Identity(3, 3) / 3.0 + spec.delta * 0.5 * g[2];
  std::vector<CMatrix> gens;
  std::vector<std::string> labels;
  for (int j : spec.subset) {
    gens.push_back(0.5 * g[static_cast<std::size_t>(j - 1)]);
    labels.push_back("x" + std::to_string(j));
  }
  return StateFamily::linear(rho0, std::move(gens), std::move(labels));
}

double qubit_Np(int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "qubit_Np: p must be >= 1");
  // odd: 2p C(p-1,(p-1)/2) / 2^p, even: p C(p,p/2) / 2^p
  const double lb = (p % 2) ? log_binom(p - 1, (p - 1) / 2) + std::log(2.0 * p)
                            : log_binom(p, p / 2) + std::log(static_cast<double>(p));
  return std::exp(lb - p * std::log(2.0));
}

std::uint64_t trinomial(int p, int s) {
  if (p < 0 || std::abs(s) > p) throw Error(ErrorCode::OutOfRange, "trinomial: need |s| <= p");
  if (p > 40) throw Error(ErrorCode::OutOfRange, "trinomial: p > 40 overflows 64 bits");
  std::vector<std::uint64_t> row{1};
  for (int q = 0; q < p; ++q) {
    std::vector<std::uint64_t> next(row.size() + 2, 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] += row[i];
      next[i + 1] += row[i];
      next[i + 2] += row[i];
    }
    row.swap(next);
  }
  return row[static_cast<std::size_t>(p + s)];
}

double qutrit_Np(int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "qutrit_Np: p must be >= 1");
  const auto row = trinomial_row(p);
  double acc = 0.0;
  for (int s = 1; s <= p; ++s) acc += s * row[static_cast<std::size_t>(p + s)];
  return acc;
}

RMatrix qutrit_C1_table() {
  const double h = 0.5, r = std::sqrt(3.0) / 2.0;
  RMatrix c(8, 8);
  c << 0, 1, 1, h, h, h, h, 0,
       1, 0, 1, h, h, h, h, 0,
       1, 1, 0, h, h, h, h, 0,
       h, h, h, 0, 1, h, h, r,
       h, h, h, 1, 0, h, h, r,
       h, h, h, h, h, 0, 1, r,
       h, h, h, h, h, 1, 0, r,
       0, 0, 0, r, r, r, r, 0;
  return c;
}

TradeoffMatrix qutrit_Cp_closed(const ScenarioSpec& spec, int p) {
  spec.validate();
  if (spec.id != ScenarioId::Qutrit) throw Error(ErrorCode::InvalidSpec, "closed-form C_p is for qutrit scenarios");
  if (spec.delta != 0.0) throw Error(ErrorCode::InvalidSpec, "closed-form C_p holds at delta = 0 only");
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  const RMatrix full = qutrit_C1_table();
  const auto n = static_cast<Eigen::Index>(spec.subset.size());
  const double scale = qutrit_Np(p) / std::pow(3.0, p - 1);
  TradeoffMatrix t;
  t.kind = TradeoffKind::C;
  t.p = p;
  t.method = "closed form C_1 N_p / 3^(p-1)";
  t.entries = RMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      t.entries(a, b) = full(spec.subset[static_cast<std::size_t>(a)] - 1, spec.subset[static_cast<std::size_t>(b)] - 1) * scale;
  return t;
}

double qubit_Tp12_closed(double delta, int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  double acc = 0.0;
  for (int s = 0; s <= p; ++s) {
    double lw = log_binom(p, s) - p * std::log(2.0);
    double w = std::exp(lw) * std::pow(1.0 + delta, s) * std::pow(1.0 - delta, p - s);
    acc += w * std::abs(2 * s - p);
  }
  return acc;
}

double qubit_C2_bound(double delta) {
  const double d2 = delta * delta;
  return 45.0 / 16.0 - d2 / 4.0 - d2 * d2 / 16.0;
}

double qubit_T2_bound(double delta) {
  const double d2 = delta * delta;
  return 47.0 / 16.0 - d2 / 8.0 - d2 * d2 / 16.0;
}

double qubit_Fbar2_bound(double delta) {
  const double a = 1.0 + delta * delta;
  return 3.0 - a * a / 8.0;
}

double qutrit_Tp_closed(const std::array<double, 3>& w, const std::array<Complex, 3>& c, int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  double acc = 0.0;
  for (int s = 0; s <= p; ++s) {
    for (int r = 0; r <= p - s; ++r) {
      const int t = p - s - r;
      double lw = log_binom(p, s) + log_binom(p - s, r);
      double weight = std::exp(lw) * std::pow(w[0], s) * std::pow(w[1], r) * std::pow(w[2], t);
      acc += weight * std::abs(static_cast<double>(s) * c[0] + static_cast<double>(r) * c[1] +
                               static_cast<double>(t) * c[2]);
    }
  }
  return 0.5 * acc;
}

double qutrit_Tp12_delta0(int p) {
  if (p < 1) throw Error(ErrorCode::OutOfRange, "p must be >= 1");
  double acc = 0.0;
  for (int s = 0; s <= p; ++s)
    for (int r = 0; r <= p - s; ++r)
      acc += std::exp(log_binom(p, s) + log_binom(p - s, r) - p * std::log(3.0)) * std::abs(3 * s - 3 * r);
  return 0.5 * acc;
}

}  // namespace qmetro
