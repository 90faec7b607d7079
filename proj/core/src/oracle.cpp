#include "xyz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xyz/errors.hpp"

namespace xyz {
namespace oracle {

namespace {

constexpr std::size_t guard_p = 20000;

void check_guard(std::size_t p, bool force) {
    if (p > guard_p && !force) {
        throw guard_error("brute_force_search: p = " + std::to_string(p) +
                          " exceeds the " + std::to_string(guard_p) +
                          " guard; pass force to run anyway");
    }
}

template <typename StrengthFn>
OracleResult scan_all_pairs(std::size_t p, const BruteForceOptions& options,
                            StrengthFn&& strength_of) {
    OracleResult result;
    if (options.histogram_bins > 0) result.histogram.assign(options.histogram_bins, 0);

    std::vector<ScoredPair> kept;
    for (std::uint32_t j = 0; j + 1 < p; ++j) {
        for (std::uint32_t k = j + 1; k < p; ++k) {
            const double s = strength_of(j, k);
            ++result.pairs_scanned;
            if (options.histogram_bins > 0) {
                const auto bins = options.histogram_bins;
                auto bin = static_cast<std::size_t>(s * static_cast<double>(bins));
                if (bin >= bins) bin = bins - 1;
                ++result.histogram[bin];
            }
            if (options.gamma && s >= *options.gamma) kept.push_back({j, k, s});
            if (options.top_k && !options.gamma) kept.push_back({j, k, s});
        }
    }
    if (options.top_k) {
        const std::size_t k = std::min(*options.top_k, kept.size());
        std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(k), kept.end(),
                          [](const ScoredPair& a, const ScoredPair& b) {
                              if (a.strength != b.strength) return a.strength > b.strength;
                              return std::make_pair(a.j, a.k) < std::make_pair(b.j, b.k);
                          });
        kept.resize(k);
        std::sort(kept.begin(), kept.end(), [](const ScoredPair& a, const ScoredPair& b) {
            return std::make_pair(a.j, a.k) < std::make_pair(b.j, b.k);
        });
    }
    result.pairs = std::move(kept);
    return result;
}

} // namespace

double scalar_strength(const PackedMatrix& x, std::span<const std::int8_t> y,
                       std::size_t j, std::size_t k) {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        if (static_cast<int>(y[i]) == x.get(i, j) * x.get(i, k)) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(x.n_rows());
}

double scalar_weighted_strength(const PackedMatrix& x, std::span<const double> y,
                                std::size_t j, std::size_t k) {
    double norm = 0.0, agree = 0.0;
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        norm += std::abs(y[i]);
        const int sy = y[i] > 0.0 ? 1 : (y[i] < 0.0 ? -1 : 0);
        if (sy == x.get(i, j) * x.get(i, k)) agree += std::abs(y[i]);
    }
    if (norm <= 0.0) throw data_error("scalar_weighted_strength: zero response vector");
    return agree / norm;
}

OracleResult brute_force_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                                const BruteForceOptions& options) {
    if (y.size() != x.n_rows()) throw data_error("brute_force_search: response length mismatch");
    check_guard(x.n_cols(), options.force);
    return scan_all_pairs(x.n_cols(), options, [&](std::uint32_t j, std::uint32_t k) {
        return scalar_strength(x, y, j, k);
    });
}

OracleResult brute_force_search(const PackedMatrix& x, std::span<const double> y,
                                const BruteForceOptions& options) {
    if (y.size() != x.n_rows()) throw data_error("brute_force_search: response length mismatch");
    check_guard(x.n_cols(), options.force);
    return scan_all_pairs(x.n_cols(), options, [&](std::uint32_t j, std::uint32_t k) {
        return scalar_weighted_strength(x, y, j, k);
    });
}

ScoredPair naive_sampling_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                                 std::size_t budget, std::mt19937_64& rng) {
    if (budget < 1) throw data_error("naive_sampling_search: budget must be >= 1");
    const std::size_t p = x.n_cols();
    std::uniform_int_distribution<std::uint32_t> dist(0, static_cast<std::uint32_t>(p - 1));
    ScoredPair best{0, 0, -1.0};
    for (std::size_t t = 0; t < budget; ++t) {
        std::uint32_t j = dist(rng), k = dist(rng);
        while (p > 1 && k == j) k = dist(rng);
        if (k < j) std::swap(j, k);
        const double s = scalar_strength(x, y, j, k);
        if (s > best.strength) best = {j, k, s};
    }
    return best;
}

} // namespace oracle
} // namespace xyz
