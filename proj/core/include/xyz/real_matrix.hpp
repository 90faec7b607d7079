#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace xyz {

using RealVector = std::vector<double>;

/// Dense column-major matrix of doubles.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t n_rows, std::size_t n_cols);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[j * n_rows_ + i]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[j * n_rows_ + i]; }

    std::span<const double> column(std::size_t j) const { return {values_.data() + j * n_rows_, n_rows_}; }
    std::span<double> column(std::size_t j) { return {values_.data() + j * n_rows_, n_rows_}; }

    const std::vector<double>& values() const { return values_; }

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<double> values_;
};

/// Inverse-CDF sampler over indices 0..n-1. Weights must be nonnegative and
/// sum to 1 within 1e-12; draws cost O(log n) and are deterministic under a
/// seeded generator.
class WeightedSampler {
public:
    explicit WeightedSampler(std::span<const double> weights);

    /// Normalize |y_i| into sampling weights. Throws if the vector is zero.
    static WeightedSampler from_magnitudes(std::span<const double> y);

    std::size_t size() const { return cumulative_.size(); }
    std::size_t sample(std::mt19937_64& rng) const;

    std::span<const double> cumulative() const { return cumulative_; }

private:
    std::vector<double> cumulative_;
};

} // namespace xyz
