#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "xyz/packed_matrix.hpp"
#include "xyz/pair_search.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

enum class SearchMode { binary, continuous_y, continuous_xy };

enum class BinarizeTransform { none, sign, unbiased };

struct SearchConfig {
    std::size_t m = 8;          // subsample size, 1..64
    std::size_t l = 1;          // repetitions
    double gamma = 0.9;         // strength threshold, (0,1]
    SearchMode mode = SearchMode::binary;
    BinarizeTransform transform = BinarizeTransform::none;  // continuous_xy only
    bool search_negatives = true;
    std::uint64_t seed = 0;
    std::uint64_t max_candidates_per_rep = 0;  // 0 -> 16 * n_cols
    bool stop_after_first_hit = false;         // forces single-threaded execution
    bool estimate_complexity = true;
    unsigned threads = 0;                      // 0 -> hardware concurrency
    std::size_t strength_sample_size = 0;      // 0 -> min(1e5, 10 * n_cols)

    void validate() const;
};

/// Strengths of uniformly sampled column pairs; the plug-in estimate of the
/// strength distribution used by the complexity formulas.
struct StrengthSample {
    std::vector<double> strengths;

    double mean_pow(std::size_t m) const;
    /// Standard error of mean_pow under i.i.d. sampling.
    double se_pow(std::size_t m) const;
};

struct SearchReport {
    std::vector<InteractionHit> hits;
    std::size_t repetitions_run = 0;
    std::uint64_t candidates_checked = 0;     // strength evaluations performed
    std::uint64_t candidates_enumerated = 0;  // sum of |E_l| over repetitions
    std::size_t aborted_repetitions = 0;      // candidate-guard trips
    double wall_time_s = 0.0;
    double estimated_c = 0.0;  // plug-in complexity, 0 when estimation is off
    double gamma0 = 0.0;       // p^{-1/M}, the strength scale of one repetition
    std::size_t m_used = 0;
    std::size_t l_used = 0;
};

/// Probability that a pair of strength gamma appears in the output after L
/// repetitions with subsample size M: 1 - (1 - gamma^M)^L.
double discovery_probability(double gamma, std::size_t m, std::size_t l);

/// Minimal L with discovery_probability(gamma, m, L) >= eta_target,
/// eta_target in [0.5, 1). Errors if gamma^M underflows to zero.
std::size_t choose_l(std::size_t m, double gamma, double eta_target);

/// Plug-in complexity np + L(Mp + p log p + n E|E_1|) with E|E_1| estimated
/// as p^2 * mean(strength^M) from the sample. Constant factors omitted.
double expected_complexity(std::size_t m, std::size_t l, const StrengthSample& sample,
                           std::size_t n, std::size_t p);

struct MSelection {
    std::size_t m = 0;
    double objective = 0.0;
    double objective_rel_err = 0.0;  // sampling error of the plug-in objective
    double gamma0 = 0.0;
    bool hit_range_cap = false;
};

/// Pareto-optimal subsample size: minimizes
/// -1/log(1-gamma^M) * (Mp + p log p + n sum_jk strength_jk^M)
/// over m_lo..m_hi, the sum estimated as p^2 * mean(strength^M). Exact ties
/// resolve to the smaller M.
MSelection optimal_m(double gamma, const StrengthSample& sample, std::size_t n,
                     std::size_t p, std::size_t m_lo = 1,
                     std::size_t m_hi = max_subsample_size);

/// Predicted runtime exponent 1 + log(gamma)/log(gamma0), 0 < gamma0 < gamma <= 1.
double runtime_exponent(double gamma, double gamma0);

/// Strengths of n_samples uniformly drawn pairs (j,k), j != k, with replacement.
StrengthSample sample_strengths(const PackedMatrix& x, const PackedMatrix& z,
                                std::size_t n_samples, std::mt19937_64& rng);
StrengthSample sample_strengths(const PackedMatrix& x, std::span<const double> y,
                                std::size_t n_samples, std::mt19937_64& rng);
StrengthSample sample_strengths(const RealMatrix& x, const RealVector& y,
                                BinarizeTransform transform, std::size_t n_samples,
                                std::mt19937_64& rng);

/// Binary data: X in {-1,+1}^{n x p} packed, Y a sign vector.
SearchReport xyz_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                        const SearchConfig& config);

/// Continuous response: rows are subsampled with probability |Y_i|/||Y||_1 and
/// Z is built from the sign pattern of Y.
SearchReport xyz_search(const PackedMatrix& x, const RealVector& y,
                        const SearchConfig& config);

/// Continuous response and predictors: X is binarized by the configured
/// transform, redrawn independently for every subsampled entry.
SearchReport xyz_search(const RealMatrix& x, const RealVector& y,
                        const SearchConfig& config);

} // namespace xyz
