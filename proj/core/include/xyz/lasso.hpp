#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

/// Unordered pair of column indices, j <= k. j == k denotes a square term
/// (continuous data only).
struct PairKey {
    std::uint32_t j = 0;
    std::uint32_t k = 0;

    auto operator<=>(const PairKey&) const = default;
};

inline PairKey make_pair_key(std::uint32_t a, std::uint32_t b) {
    return a <= b ? PairKey{a, b} : PairKey{b, a};
}

/// Centered view of the design: main columns with means removed and
/// on-demand interaction columns, the elementwise product of two centered
/// mains minus its own mean. Served columns have mean 0 within 1e-10.
class CenteredDesignView {
public:
    explicit CenteredDesignView(const RealMatrix& x);

    std::size_t n() const { return x_->n_rows(); }
    std::size_t p() const { return x_->n_cols(); }

    double column_mean(std::size_t j) const { return means_[j]; }
    double max_abs_column_mean() const { return max_abs_mean_; }

    /// Centered main column j.
    void main_column(std::size_t j, std::vector<double>& out) const;
    /// Centered interaction column for the pair {j,k}.
    void pair_column(PairKey key, std::vector<double>& out) const;
    /// Correlation |col^T r| uses this directly to avoid materializing:
    /// r must be centered, so the product-mean term drops out.
    double pair_correlation(PairKey key, const RealVector& residual) const;
    double main_correlation(std::size_t j, const RealVector& residual) const;

private:
    const RealMatrix* x_;
    std::vector<double> means_;
    double max_abs_mean_ = 0.0;
};

/// Elementwise product of columns j and k minus its mean.
RealVector interaction_column(const RealMatrix& x, std::size_t j, std::size_t k);

struct LassoPathConfig {
    std::vector<double> lambdas;  // strictly decreasing; empty -> auto grid
    std::size_t grid_size = 20;   // T for the auto grid
    double grid_ratio = 0.05;     // lambda_T = ratio * lambda_1

    std::optional<std::size_t> kkt_l;  // fixed xyz L per KKT check
    double kkt_eta = 0.0;              // >0: L from choose_l at this target; else L = ceil(sqrt(p))
    std::size_t kkt_strength_sample = 2000;
    std::uint64_t kkt_max_candidates = 0;  // 0 = unlimited

    std::size_t max_active_set_iterations = 100;
    double cd_tol = 1e-7;
    std::size_t cd_max_cycles = 100000;
    double interaction_penalty = 1.0;  // multiplier on the pair penalty

    std::uint64_t seed = 0;
    unsigned threads = 1;

    bool exclude_diagonal = false;  // forced on for binary data
    bool certify_exhaustive = true; // exhaustive per-lambda KKT scan when p allows
    std::size_t certify_max_p = 512;
};

struct SparseFit {
    double lambda = 0.0;
    std::map<std::uint32_t, double> beta;  // nonzero main effects
    std::map<PairKey, double> theta;       // nonzero pair effects
    double objective = 0.0;
    /// Max of |correlation|/n - penalty over coordinates examined at
    /// termination (<= 0 means all examined coordinates satisfied KKT).
    double kkt_residual_max = 0.0;
    /// True when a full O(np^2) KKT scan at termination found no violation
    /// beyond lambda * (1 + 1e-6).
    bool certified_exhaustive = false;
    bool screening_degenerate = false;  // KKT screening fell back to exact scans
    std::size_t active_set_iterations = 0;
    std::size_t cd_cycles = 0;
};

/// lambda_1 = max correlation of any centered main or interaction column with
/// centered Y, then T log-spaced values down to ratio * lambda_1. The
/// interaction part is exact for p <= 512 and estimated from a strength
/// sample above that.
std::vector<double> auto_lambda_grid(const RealMatrix& x, const RealVector& y,
                                     std::size_t t, double ratio,
                                     std::uint64_t seed = 0);

struct ActiveSetResult {
    SparseFit fit;
    RealVector residual;  // y_centered minus fitted values
};

/// Cyclic coordinate descent with soft-thresholding over the given active
/// coordinates only; everything else is constrained to zero. Warm starts from
/// `warm` when provided. Throws solver_error if cd_max_cycles is exceeded.
ActiveSetResult active_set_solve(const CenteredDesignView& design,
                                 const std::vector<std::uint32_t>& active_main,
                                 const std::vector<PairKey>& active_pairs,
                                 const RealVector& y_centered, double lambda,
                                 const LassoPathConfig& config,
                                 const SparseFit* warm = nullptr);

/// Probabilistic KKT sweep over all interaction pairs: xyz searches the raw
/// product columns against +-residual at a strength threshold derived from
/// lambda, then every candidate is re-verified with an exact centered dot
/// product, so the returned set contains no false positives. Pairs can be
/// missed with probability controlled by the config's eta target.
std::vector<PairKey> kkt_check_interactions(const RealVector& residual, const RealMatrix& x,
                                            double lambda, const LassoPathConfig& config,
                                            std::uint64_t seed_stream = 1);

/// Max over every coordinate (mains, all pairs, squares unless excluded) of
/// |correlation|/n divided by its penalty level. Exact and O(np^2).
double exhaustive_kkt_max_correlation(const CenteredDesignView& design,
                                      const RealVector& residual,
                                      double interaction_penalty, bool exclude_diagonal);

/// Pathwise active-set fit: for each lambda, warm-start from the previous
/// support, solve the restricted problem, and grow the support by exact main
/// scans plus xyz-screened interaction sweeps until no violation remains.
std::vector<SparseFit> lasso_path(const RealMatrix& x, const RealVector& y,
                                  const LassoPathConfig& config);

} // namespace xyz
