#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

/// n x p matrix of i.i.d. uniform +-1 entries.
PackedMatrix rademacher_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng);

/// Sign response with a planted interaction: Y_i = X_ij * X_ik on exactly
/// round(gamma * n) rows (chosen uniformly) and the negation elsewhere, so the
/// planted pair has strength round(gamma*n)/n exactly.
std::vector<std::int8_t> plant_interaction(const PackedMatrix& x, std::size_t j, std::size_t k,
                                           double gamma, std::mt19937_64& rng);

struct PlantedBinaryInstance {
    PackedMatrix x;
    std::vector<std::int8_t> y;
    double planted_strength = 0.0;  // realized strength of the pair (0,1)
};

/// Rademacher X with the pair (0,1) planted at the requested strength.
PlantedBinaryInstance planted_binary_instance(std::size_t n, std::size_t p, double gamma,
                                              std::uint64_t seed);

/// n x p matrix of i.i.d. standard normal entries.
RealMatrix gaussian_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng);

/// n x p matrix of i.i.d. Uniform(-1,1) entries.
RealMatrix uniform_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng);

} // namespace xyz
