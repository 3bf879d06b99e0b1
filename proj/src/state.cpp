#include "qmetro/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

constexpr double kTraceTolFamily = 1e-10;
constexpr double kTraceTolState = 1e-9;
constexpr double kNegEigTol = 1e-10;
constexpr double kDerivTol = 1e-8;

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
  if (labels.empty()) {
    for (std::size_t j = 0; j < n; ++j) labels.push_back("x" + std::to_string(j + 1));
  }
  if (labels.size() != n) throw Error(ErrorCode::DimMismatch, "labels: expected one label per parameter");
  return labels;
}

}  // namespace

StateFamily StateFamily::linear(CMatrix rho0, std::vector<CMatrix> generators,
                                std::vector<std::string> labels) {
  if (rho0.rows() != rho0.cols() || rho0.rows() < 1)
    throw Error(ErrorCode::DimMismatch, "linear family: rho0 must be square");
  if (generators.size() < 2)
    throw Error(ErrorCode::InvalidN, "linear family: need at least two parameters");
  if (std::abs(rho0.trace() - Complex(1.0, 0.0)) > kTraceTolFamily)
    throw Error(ErrorCode::InvalidState, "linear family: trace(rho0) != 1");
  if (!is_hermitian(rho0)) throw Error(ErrorCode::NonHermitian, "linear family: rho0 not Hermitian");
  for (const auto& g : generators) {
    if (g.rows() != rho0.rows() || g.cols() != rho0.cols())
      throw Error(ErrorCode::DimMismatch, "linear family: generator dimension mismatch");
    if (!is_hermitian(g)) throw Error(ErrorCode::NonHermitian, "linear family: generator not Hermitian");
  }
  StateFamily f;
  f.dim_ = static_cast<std::size_t>(rho0.rows());
  f.n_ = generators.size();
  f.labels_ = default_labels(f.n_, std::move(labels));
  f.linear_ = LinearForm{std::move(rho0), std::move(generators)};
  return f;
}

StateFamily StateFamily::callable(std::size_t dim, std::size_t n, StateMap map,
                                  std::vector<std::string> labels) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "callable family: dim must be >= 1");
  if (n < 2) throw Error(ErrorCode::InvalidN, "callable family: need at least two parameters");
  if (!map) throw Error(ErrorCode::InvalidArgument, "callable family: empty map");
  StateFamily f;
  f.dim_ = dim;
  f.n_ = n;
  f.labels_ = default_labels(n, std::move(labels));
  f.map_ = std::move(map);
  return f;
}

const LinearForm& StateFamily::linear_form() const {
  if (!linear_) throw Error(ErrorCode::InvalidArgument, "family is not linear");
  return *linear_;
}

CMatrix StateFamily::at(const RVector& x) const {
  if (static_cast<std::size_t>(x.size()) != n_)
    throw Error(ErrorCode::DimMismatch, "family: parameter vector has wrong length");
  if (linear_) {
    CMatrix rho = linear_->rho0;
    for (std::size_t j = 0; j < n_; ++j) rho += x(static_cast<Eigen::Index>(j)) * linear_->generators[j];
    return rho;
  }
  CMatrix rho = map_(x);
  if (static_cast<std::size_t>(rho.rows()) != dim_ || rho.rows() != rho.cols())
    throw Error(ErrorCode::DimMismatch, "family: callable returned wrong dimension");
  return rho;
}

RVector EvaluatedState::support_values() const {
  const auto m = static_cast<Eigen::Index>(support_rank);
  return eigen.values.tail(m);
}

CMatrix EvaluatedState::support_vectors() const {
  const auto m = static_cast<Eigen::Index>(support_rank);
  return eigen.vectors.rightCols(m);
}

CMatrix EvaluatedState::support_projector() const {
  CMatrix v = support_vectors();
  return v * v.adjoint();
}

CMatrix EvaluatedState::sqrt_rho() const {
  CMatrix v = support_vectors();
  RVector l = support_values();
  CMatrix scaled = v;
  for (Eigen::Index q = 0; q < l.size(); ++q) scaled.col(q) *= std::sqrt(l(q));
  return hermitian_part(scaled * v.adjoint());
}

EvaluatedState make_state(CMatrix rho, std::vector<CMatrix> derivs) {
  if (rho.rows() != rho.cols() || rho.rows() < 1)
    throw Error(ErrorCode::InvalidState, "state must be a square matrix");
  if (!is_hermitian(rho, 1e-10)) throw Error(ErrorCode::InvalidState, "state is not Hermitian");
  rho = hermitian_part(rho);
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kTraceTolState)
    throw Error(ErrorCode::InvalidState, "trace(rho) != 1");

  EvaluatedState s;
  s.eigen = eigh(rho);
  if (s.eigen.values(0) < -kNegEigTol)
    throw Error(ErrorCode::InvalidState, "rho has negative eigenvalue " + std::to_string(s.eigen.values(0)));
  s.rank_tol = default_rank_tol(s.eigen.values);
  s.support_rank = static_cast<std::size_t>((s.eigen.values.array() > s.rank_tol).count());
  s.rho = std::move(rho);

  for (auto& d : derivs) {
    if (d.rows() != s.rho.rows() || d.cols() != s.rho.cols())
      throw Error(ErrorCode::DimMismatch, "derivative dimension mismatch");
    if (!is_hermitian(d, kDerivTol)) throw Error(ErrorCode::DerivativeFailure, "derivative not Hermitian");
    if (std::abs(d.trace()) > kDerivTol) throw Error(ErrorCode::DerivativeFailure, "derivative not traceless");
    d = hermitian_part(d);
  }
  s.derivs = std::move(derivs);
  return s;
}

std::vector<CMatrix> finite_diff_derivs(const StateFamily& family, const RVector& x0, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite_diff_derivs: h must be positive");
  std::vector<CMatrix> out;
  out.reserve(family.n());
  for (std::size_t j = 0; j < family.n(); ++j) {
    RVector xp = x0, xm = x0;
    xp(static_cast<Eigen::Index>(j)) += h;
    xm(static_cast<Eigen::Index>(j)) -= h;
    CMatrix d = (family.at(xp) - family.at(xm)) / (2.0 * h);
    if (!is_hermitian(d, kDerivTol))
      throw Error(ErrorCode::DerivativeFailure, "finite difference is not Hermitian");
    out.push_back(hermitian_part(d));
  }
  return out;
}

EvaluatedState evaluate(const StateFamily& family, const RVector& x0, const EvaluateOptions& opts) {
  if (static_cast<std::size_t>(x0.size()) != family.n())
    throw Error(ErrorCode::DimMismatch, "evaluate: x0 has wrong length");
  CMatrix rho = family.at(x0);
  std::vector<CMatrix> derivs;
  if (family.is_linear()) {
    derivs = family.linear_form().generators;
  } else {
    double h = opts.fd_step.value_or(1e-5 * std::max(1.0, x0.size() ? x0.cwiseAbs().maxCoeff() : 0.0));
    derivs = finite_diff_derivs(family, x0, h);
  }
  return make_state(std::move(rho), std::move(derivs));
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidArgument, "matrix: expected nonempty array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorCode::InvalidArgument, "matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      } else {
        throw Error(ErrorCode::InvalidArgument, "matrix: entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

FamilyDocument family_from_json(const nlohmann::json& doc) {
  try {
    const auto dim = doc.at("dim").get<std::size_t>();
    const auto n = doc.at("n").get<std::size_t>();
    CMatrix rho0 = matrix_from_json(doc.at("rho0"));
    std::vector<CMatrix> gens;
    for (const auto& g : doc.at("generators")) gens.push_back(matrix_from_json(g));
    if (static_cast<std::size_t>(rho0.rows()) != dim || gens.size() != n)
      throw Error(ErrorCode::DimMismatch, "state document: dim/n disagree with matrices");
    std::vector<std::string> labels;
    if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
    RVector x0 = RVector::Zero(static_cast<Eigen::Index>(n));
    if (doc.contains("x0")) {
      auto v = doc.at("x0").get<std::vector<double>>();
      if (v.size() != n) throw Error(ErrorCode::DimMismatch, "state document: x0 length != n");
      for (std::size_t j = 0; j < n; ++j) x0(static_cast<Eigen::Index>(j)) = v[j];
    }
    return {StateFamily::linear(std::move(rho0), std::move(gens), std::move(labels)), x0};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("state document: ") + e.what());
  }
}

nlohmann::json family_to_json(const StateFamily& family, const RVector& x0) {
  const auto& lin = family.linear_form();
  nlohmann::json doc;
  doc["dim"] = family.dim();
  doc["n"] = family.n();
  doc["rho0"] = matrix_to_json(lin.rho0);
  doc["generators"] = nlohmann::json::array();
  for (const auto& g : lin.generators) doc["generators"].push_back(matrix_to_json(g));
  doc["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
  doc["labels"] = family.labels();
  return doc;
}

}  // namespace qmetro
