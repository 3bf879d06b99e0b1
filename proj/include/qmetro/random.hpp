#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmetro/linalg.hpp"

namespace qmetro {

using Rng = std::mt19937_64;

CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
CMatrix random_unitary(std::size_t d, Rng& rng);
CMatrix random_hermitian(std::size_t d, Rng& rng);
CMatrix random_traceless_hermitian(std::size_t d, Rng& rng);
// Full-rank unless rank < d is requested.
CMatrix random_density(std::size_t d, Rng& rng, std::size_t rank = 0);
// Rank-one elements from the rows of a Haar isometry, `outcomes` >= d.
std::vector<CMatrix> random_povm(std::size_t d, std::size_t outcomes, Rng& rng);
// Positive definite, real symmetric.
RMatrix random_spd(std::size_t n, Rng& rng);

}  // namespace qmetro
