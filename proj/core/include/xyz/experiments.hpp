#pragma once

#include <cstdint>
#include <vector>

#include "xyz/real_matrix.hpp"

namespace xyz {

/// Measurement harnesses behind the bench CLI and the acceptance suite.
/// Everything is seeded and emits plain rows meant for CSV output.

struct ScalingPoint {
    std::size_t p = 0;
    std::size_t m = 0;
    double gamma0 = 0.0;
    double median_time_s = 0.0;
    double mean_repetitions = 0.0;
    bool planted_found_in_all_runs = false;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    double fitted_slope = 0.0;       // least-squares slope of log t vs log p
    double predicted_exponent = 0.0; // 1 + log(gamma)/log(gamma0 target)
};

/// Time-to-discovery of a planted pair of strength `gamma` as p grows, with M
/// chosen per p so that p^{-1/M} tracks gamma0_target. One timing averages
/// `episodes_per_run` independent discovery episodes (the repetition count per
/// episode is geometric, so a single episode is far too noisy to fit a
/// slope); the median over `runs` such timings is reported, after one untimed
/// warmup.
ScalingResult run_scaling_suite(const std::vector<std::size_t>& p_values, std::size_t n,
                                double gamma, double gamma0_target, std::size_t runs,
                                std::uint64_t seed, std::size_t episodes_per_run = 100);

struct GaussVsMinimalPoint {
    std::size_t p = 0;
    double gamma = 0.0;
    std::size_t m = 0;     // ceil(log2 p)
    double tau = 0.0;      // budget-matched threshold, +-1/2 encoding
    double eta_minimal = 0.0;
    double eta_gauss = 0.0;
    bool has_empirical = false;
    double emp_minimal = 0.0;
    double emp_gauss = 0.0;
};

/// Single-repetition discovery probability of one planted pair for minimal
/// subsampling vs the dense Gaussian baseline at matched candidate budget.
/// Empirical frequencies are measured at p == empirical_p over `trials`
/// repetitions (0 trials = formulas only).
std::vector<GaussVsMinimalPoint> run_gauss_vs_minimal(
    const std::vector<std::size_t>& p_values, const std::vector<double>& gammas,
    std::size_t n, std::size_t empirical_p, std::size_t trials, std::uint64_t seed);

struct NaiveRacePoint {
    std::uint64_t budget = 0;  // strength evaluations allowed
    double xyz_best = 0.0;
    double naive_best = 0.0;
};

struct NaiveRaceResult {
    std::vector<NaiveRacePoint> points;
    double planted_strength = 0.0;
    std::uint64_t xyz_budget_to_planted = 0;    // 0 = never reached
    std::uint64_t naive_budget_to_planted = 0;
};

/// Best interaction strength found as a function of the evaluation budget for
/// xyz repetitions vs uniform pair sampling on a planted instance.
NaiveRaceResult run_naive_race(std::size_t n, std::size_t p, double gamma,
                               const std::vector<std::uint64_t>& budgets, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace xyz
