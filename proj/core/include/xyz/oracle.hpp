#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {
namespace oracle {

struct ScoredPair {
    std::uint32_t j = 0;  // j < k
    std::uint32_t k = 0;
    double strength = 0.0;
};

struct OracleResult {
    std::vector<ScoredPair> pairs;   // selected by threshold or top-k, ordered by (j,k)
    std::uint64_t pairs_scanned = 0; // always p(p-1)/2
    std::vector<std::uint64_t> histogram;  // strength counts in [0,1] bins, optional
};

struct BruteForceOptions {
    std::optional<double> gamma;      // keep pairs with strength >= gamma
    std::optional<std::size_t> top_k; // or the k strongest
    std::size_t histogram_bins = 0;   // 0 = no histogram
    bool force = false;               // override the p <= 20000 guard
};

/// Exact strengths of every pair j < k via plain scalar loops; deliberately
/// shares no code with the popcount fast path.
OracleResult brute_force_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                                const BruteForceOptions& options);

/// Continuous-response analogue using the weighted strength definition.
OracleResult brute_force_search(const PackedMatrix& x, std::span<const double> y,
                                const BruteForceOptions& options);

/// Scalar-loop strength of one pair; the reference the fast kernels are
/// tested against.
double scalar_strength(const PackedMatrix& x, std::span<const std::int8_t> y,
                       std::size_t j, std::size_t k);
double scalar_weighted_strength(const PackedMatrix& x, std::span<const double> y,
                                std::size_t j, std::size_t k);

/// Budgeted uniform sampling over pairs, keeping the strongest seen. The
/// baseline xyz is compared against.
ScoredPair naive_sampling_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                                 std::size_t budget, std::mt19937_64& rng);

} // namespace oracle
} // namespace xyz
