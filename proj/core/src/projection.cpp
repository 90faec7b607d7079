#include "xyz/projection.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "xyz/errors.hpp"

namespace xyz {

SubsampleDraw draw_subsample(std::size_t n, std::size_t m,
                             const WeightedSampler* weights, std::mt19937_64& rng) {
    if (n == 0) throw data_error("draw_subsample: n must be >= 1");
    if (m < 1 || m > max_subsample_size) {
        throw data_error("draw_subsample: M = " + std::to_string(m) + " outside [1,64]");
    }
    if (weights != nullptr && weights->size() != n) {
        throw data_error("draw_subsample: weight table size mismatch");
    }
    SubsampleDraw draw;
    draw.indices.resize(m);
    if (weights != nullptr) {
        for (std::size_t s = 0; s < m; ++s) draw.indices[s] = weights->sample(rng);
    } else {
        std::uniform_int_distribution<std::size_t> dist(0, n - 1);
        for (std::size_t s = 0; s < m; ++s) draw.indices[s] = dist(rng);
    }
    return draw;
}

std::vector<ProjectionKey> project_keys(const PackedMatrix& a, const SubsampleDraw& draw) {
    const std::size_t m = draw.m();
    if (m == 0 || m > max_subsample_size) {
        throw data_error("project_keys: draw size outside [1,64]");
    }
    // Precompute word/bit offsets once; each column then reads M words from
    // its own contiguous block.
    std::vector<std::size_t> word_idx(m);
    std::vector<unsigned> bit_idx(m);
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t i = draw.indices[s];
        if (i >= a.n_rows()) throw data_error("project_keys: draw index out of range");
        word_idx[s] = i >> 6;
        bit_idx[s] = static_cast<unsigned>(i & 63);
    }
    std::vector<ProjectionKey> keys(a.n_cols());
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        const auto col = a.column_words(j);
        std::uint64_t key = 0;
        for (std::size_t s = 0; s < m; ++s) {
            key |= ((col[word_idx[s]] >> bit_idx[s]) & 1u) << s;
        }
        keys[j] = {static_cast<std::uint32_t>(j), key};
    }
    return keys;
}

DenseProjection project_dense(const PackedMatrix& x, const PackedMatrix& z,
                              std::mt19937_64& rng) {
    if (x.n_rows() != z.n_rows()) throw data_error("project_dense: row count mismatch");
    const std::size_t n = x.n_rows();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> r(n);
    for (double& v : r) v = gauss(rng);

    DenseProjection proj;
    proj.x.assign(x.n_cols(), 0.0);
    proj.z.assign(z.n_cols(), 0.0);
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x.get(i, j) > 0 ? r[i] : -r[i];
        proj.x[j] = acc;
    }
    for (std::size_t k = 0; k < z.n_cols(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += z.get(i, k) > 0 ? r[i] : -r[i];
        proj.z[k] = acc;
    }
    return proj;
}

double normal_cdf(double x) {
    static const boost::math::normal_distribution<double> std_normal;
    return boost::math::cdf(std_normal, x);
}

double normal_quantile(double q) {
    static const boost::math::normal_distribution<double> std_normal;
    return boost::math::quantile(std_normal, q);
}

double gauss_tau_for_budget(std::size_t p, std::size_t n) {
    if (p < 2) throw data_error("gauss_tau_for_budget: p must be >= 2");
    const double sigma = std::sqrt(static_cast<double>(n) / 2.0);
    const double pp = static_cast<double>(p);
    return sigma * normal_quantile((1.0 + 1.0 / pp) / 2.0);
}

double dense_gauss_retention(double gamma, std::size_t p) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw data_error("dense_gauss_retention: gamma outside [0,1]");
    }
    if (gamma == 1.0) return 1.0;
    // tau and the pair-difference sd both scale with sqrt(n), so the
    // retention probability does not depend on n.
    const double q = normal_quantile((1.0 + 1.0 / static_cast<double>(p)) / 2.0);
    const double scaled = q * std::sqrt(0.5 / (1.0 - gamma));
    return 2.0 * normal_cdf(scaled) - 1.0;
}

} // namespace xyz
