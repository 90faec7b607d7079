#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

/// Z_ij = Y_i * X_ij for a sign response. In the bit encoding this is the
/// XNOR of X's bits with Y's bit pattern, with column padding re-masked to 0.
PackedMatrix build_z(const PackedMatrix& x, std::span<const std::int8_t> y);

/// Fraction of rows where Y_i == X_ij * X_ik, evaluated as the agreement
/// count between columns Z_j and X_k (the two are identical by construction
/// of Z). Value in [0,1]; 0.5 is the noise level for balanced data.
double interaction_strength(const PackedMatrix& x, const PackedMatrix& z,
                            std::size_t j, std::size_t k);

/// Continuous-response analogue: sum of |Y_i| over rows where
/// sgn(Y_i) == X_ij * X_ik, normalized by ||Y||_1. Rows with Y_i == 0
/// contribute nothing. Reduces to interaction_strength for Y in {-1,+1}^n.
double weighted_interaction_strength(const PackedMatrix& x, std::span<const double> y,
                                     std::size_t j, std::size_t k);

/// Entrywise sign; exact zeros resolved by an independent fair coin per entry
/// per call.
PackedMatrix sign_transform(const RealMatrix& x, std::mt19937_64& rng);

/// Randomized binarization with P(+1) = (x+1)/2, so E[result] = x entrywise.
/// Entries must lie in [-1,1]; rescale or cap first.
PackedMatrix unbiased_transform_sample(const RealMatrix& x, std::mt19937_64& rng);

/// Divide row i by nu_i = max_j |X_ij| and multiply Y_i by nu_i^2. Leaves
/// every entry of X in [-1,1] and preserves all products Y_i X_ij X_ik.
std::pair<RealMatrix, RealVector> rescale_rows(const RealMatrix& x, const RealVector& y);

/// Clamp entries to [-c, c], c > 0.
RealMatrix cap_entries(const RealMatrix& x, double c);

} // namespace xyz
