#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/state.hpp"
#include "qmetro/tensor_bounds.hpp"

namespace qmetro {

enum class ScenarioId { Qubit3, Qutrit };

struct ScenarioSpec {
  ScenarioId id = ScenarioId::Qubit3;
  double delta = 0.0;
  std::vector<int> subset;  // 1-based Gell-Mann indices (qutrit only)

  // "qubit3", "qutrit8", "qutrit:1,2,5", ...
  static ScenarioSpec parse(std::string_view id, double delta = 0.0);
  std::string name() const;
  void validate() const;
};

std::array<CMatrix, 3> pauli();
// Lambda_1..Lambda_8 in the usual printed order, Lambda_8 = diag(1,1,-2)/sqrt(3).
std::array<CMatrix, 8> gell_mann();

// qubit: rho = (I + delta sigma_3)/2 + sum x_j sigma_j/2
// qutrit: rho = I/3 + delta G_3 + sum_{j in subset} x_j G_j, G_j = Lambda_j/2
StateFamily build_scenario(const ScenarioSpec& spec);

// 2^{-p} |sigma_3p|_1
double qubit_Np(int p);
// coefficient of x^{p+s} in (1+x+x^2)^p
std::uint64_t trinomial(int p, int s);
// sum_{s=0}^p s * trinomial(p, s)
double qutrit_Np(int p);

// Pairwise |[G_j, G_k]|_1 for the eight qutrit directions, as tabulated.
RMatrix qutrit_C1_table();
// C_p = C_1 N_p / 3^{p-1}, delta = 0 only.
TradeoffMatrix qutrit_Cp_closed(const ScenarioSpec& spec, int p);

// (T_p)_12 = 2^{-p} sum_s binom(p,s)(1+delta)^s(1-delta)^{p-s}|2s-p|
double qubit_Tp12_closed(double delta, int p);
// C_2 and T_2 entries for the qubit family (1,2), (1,3), (2,3)
double qubit_C2_bound(double delta);
double qubit_T2_bound(double delta);
double qubit_Fbar2_bound(double delta);

// 1/2 sum_{s,r} p!/(s! r! (p-s-r)!) w0^s w1^r w2^{p-s-r} |s c0 + r c1 + (p-s-r) c2|
double qutrit_Tp_closed(const std::array<double, 3>& weights, const std::array<Complex, 3>& diag, int p);
// delta = 0, pair (1,2): 1/2 (1/3)^p sum binom binom |3s - 3r|
double qutrit_Tp12_delta0(int p);

}  // namespace qmetro
