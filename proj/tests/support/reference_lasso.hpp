#pragma once

// Test-only reference implementations, kept independent of the xyz screening
// path: the design matrix is fully materialized and KKT sweeps are exhaustive.

#include <cstdint>
#include <vector>

#include "xyz/lasso.hpp"
#include "xyz/real_matrix.hpp"

namespace testsupport {

struct ExplicitDesign {
    std::size_t n = 0;
    std::vector<std::vector<double>> columns;  // centered, mains then pairs
    std::vector<bool> is_pair;
    std::vector<xyz::PairKey> pair_of;   // valid where is_pair
    std::vector<std::uint32_t> main_of;  // valid where !is_pair
    double y_mean = 0.0;
    std::vector<double> y_centered;

    static ExplicitDesign build(const xyz::RealMatrix& x, const xyz::RealVector& y,
                                bool exclude_diagonal);
};

/// Pathwise Lasso on the explicit design: active-set coordinate descent with
/// exhaustive KKT scans over every materialized column.
std::vector<std::vector<double>> reference_lasso_path(const ExplicitDesign& design,
                                                      const std::vector<double>& lambdas,
                                                      double interaction_penalty = 1.0,
                                                      double tol = 1e-8,
                                                      std::size_t max_cycles = 200000);

/// Max-norm difference between a SparseFit and a reference coefficient vector.
double max_coef_diff(const ExplicitDesign& design, const std::vector<double>& ref_coefs,
                     const xyz::SparseFit& fit);

struct RegressionInstance {
    xyz::RealMatrix x;
    xyz::RealVector y;
    std::vector<std::uint32_t> main_support;
    std::vector<xyz::PairKey> pair_support;
};

/// The two simulation settings used for the regression experiments: X rows
/// i.i.d. standard normal, 20 main effects and 10 interactions with
/// magnitudes uniform on [2,6], noise sd 1. Setting 1 places interactions
/// inside the main support (hierarchical), setting 2 outside it
/// (anti-hierarchical).
RegressionInstance make_regression_instance(std::size_t n, std::size_t p, int setting,
                                            std::uint64_t seed);

/// Prediction on new rows using train-column means; y_hat = y_mean + design
/// applied to the sparse fit.
xyz::RealVector predict(const xyz::RealMatrix& x_new, const xyz::RealMatrix& x_train,
                        double train_y_mean, const xyz::SparseFit& fit);

double normalized_test_error(const xyz::RealVector& y_true, const xyz::RealVector& y_hat);

/// Two-stage baseline: mains-only Lasso, then a second Lasso over the selected
/// mains plus their pairwise interactions; returns the smallest normalized
/// test error over the lambda grid.
double two_stage_best_test_error(const xyz::RealMatrix& x_train, const xyz::RealVector& y_train,
                                 const xyz::RealMatrix& x_test, const xyz::RealVector& y_test,
                                 const std::vector<double>& lambdas);

} // namespace testsupport
