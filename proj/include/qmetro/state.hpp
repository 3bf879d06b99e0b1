#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmetro/linalg.hpp"

namespace qmetro {

// rho(x) = rho0 + sum_j x_j G_j
struct LinearForm {
  CMatrix rho0;
  std::vector<CMatrix> generators;
};

using StateMap = std::function<CMatrix(const RVector&)>;

class StateFamily {
 public:
  static StateFamily linear(CMatrix rho0, std::vector<CMatrix> generators,
                            std::vector<std::string> labels = {});
  static StateFamily callable(std::size_t dim, std::size_t n, StateMap map,
                              std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  std::size_t n() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_linear() const { return linear_.has_value(); }
  const LinearForm& linear_form() const;

  CMatrix at(const RVector& x) const;

 private:
  StateFamily() = default;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::optional<LinearForm> linear_;
  StateMap map_;
};

struct EvaluatedState {
  CMatrix rho;
  EigenSystem eigen;              // full spectrum, ascending; support is the top support_rank columns
  std::size_t support_rank = 0;
  double rank_tol = 0.0;
  std::vector<CMatrix> derivs;

  std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
  std::size_t n() const { return derivs.size(); }
  // support eigenpairs, ascending
  RVector support_values() const;
  CMatrix support_vectors() const;
  CMatrix support_projector() const;
  CMatrix sqrt_rho() const;
  bool is_pure() const { return support_rank == 1; }
};

struct EvaluateOptions {
  std::optional<double> fd_step;  // default 1e-5 * max(1, |x0|_inf)
};

EvaluatedState evaluate(const StateFamily& family, const RVector& x0, const EvaluateOptions& opts = {});

// Validates rho and derivs directly; n may be 1 here.
EvaluatedState make_state(CMatrix rho, std::vector<CMatrix> derivs);

std::vector<CMatrix> finite_diff_derivs(const StateFamily& family, const RVector& x0, double h);

// {dim, n, rho0, generators, x0, labels}; matrices as nested [re, im] pairs.
struct FamilyDocument {
  StateFamily family;
  RVector x0;
};
FamilyDocument family_from_json(const nlohmann::json& doc);
nlohmann::json family_to_json(const StateFamily& family, const RVector& x0);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qmetro
