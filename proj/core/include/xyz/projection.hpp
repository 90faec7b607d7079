#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

/// Row indices i_1..i_M drawn i.i.d. with replacement, uniform or weighted.
struct SubsampleDraw {
    std::vector<std::size_t> indices;

    std::size_t m() const { return indices.size(); }
};

/// One projected column: the subsampled sign pattern packed into the low M
/// bits of a word (bit m set iff the column is +1 at row i_m). Two columns
/// collide under the projection iff their keys are equal.
struct ProjectionKey {
    std::uint32_t column = 0;
    std::uint64_t key = 0;
};

/// Dense Gaussian projection of X and Z, the baseline xyz is compared to.
struct DenseProjection {
    RealVector x;
    RealVector z;
    double tau = 0.0;
};

inline constexpr std::size_t max_subsample_size = 64;

/// M indices i.i.d. uniform on [0,n) when weights are absent, else i.i.d.
/// from the sampler. Requires 1 <= M <= 64.
SubsampleDraw draw_subsample(std::size_t n, std::size_t m,
                             const WeightedSampler* weights, std::mt19937_64& rng);

/// Keys of all columns of a packed matrix under one draw.
std::vector<ProjectionKey> project_keys(const PackedMatrix& a, const SubsampleDraw& draw);

/// x_j = sum_i R_i X_ij and z_k = sum_i R_i Z_ik with R_i i.i.d. N(0,1).
/// With the +-1 encoding, x_j - z_k ~ N(0, 4n(1-gamma_jk)).
DenseProjection project_dense(const PackedMatrix& x, const PackedMatrix& z,
                              std::mt19937_64& rng);

/// Close-pairs threshold giving the Gaussian baseline the same candidate
/// budget as minimal subsampling: tau with P(|W| <= tau) = 1/p for
/// W ~ N(0, n/2). Stated in the +-1/2 encoding; multiply by 2 before
/// comparing against project_dense differences.
double gauss_tau_for_budget(std::size_t p, std::size_t n);

/// Single-repetition probability that the Gaussian baseline retains a pair of
/// strength gamma at the budget-matched tau: P(|W| <= tau), W ~ N(0, n(1-gamma)).
/// Independent of n. Returns 1 for gamma == 1.
double dense_gauss_retention(double gamma, std::size_t p);

/// Standard normal CDF and quantile.
double normal_cdf(double x);
double normal_quantile(double q);

} // namespace xyz
