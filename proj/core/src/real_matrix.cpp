#include "xyz/real_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"

namespace xyz {

RealMatrix::RealMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), values_(n_rows * n_cols, 0.0) {
    if (n_rows == 0 || n_cols == 0) {
        throw data_error("RealMatrix: n_rows and n_cols must be >= 1");
    }
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
    if (weights.empty()) throw data_error("WeightedSampler: empty weight vector");
    cumulative_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            throw data_error("WeightedSampler: negative or NaN weight at index " + std::to_string(i));
        }
        acc += weights[i];
        cumulative_[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-12) {
        throw data_error("WeightedSampler: weights sum to " + std::to_string(acc) + ", expected 1");
    }
    cumulative_.back() = 1.0;
}

WeightedSampler WeightedSampler::from_magnitudes(std::span<const double> y) {
    double norm = 0.0;
    for (double v : y) norm += std::abs(v);
    if (norm <= 0.0) throw data_error("WeightedSampler: zero response vector");
    std::vector<double> w(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) w[i] = std::abs(y[i]) / norm;
    // Renormalize the tail so the cumulative table ends at 1 exactly.
    double acc = 0.0;
    for (double v : w) acc += v;
    for (double& v : w) v /= acc;
    return WeightedSampler(w);
}

std::size_t WeightedSampler::sample(std::mt19937_64& rng) const {
    const double u = uniform_unit(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

} // namespace xyz
