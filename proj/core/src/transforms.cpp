#include "xyz/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"

namespace xyz {

PackedMatrix build_z(const PackedMatrix& x, std::span<const std::int8_t> y) {
    if (y.size() != x.n_rows()) {
        throw data_error("build_z: response length " + std::to_string(y.size()) +
                         " != n_rows " + std::to_string(x.n_rows()));
    }
    const auto y_words = pack_signs(y);
    PackedMatrix z(x.n_rows(), x.n_cols());
    const std::size_t wpc = x.words_per_col();
    const std::uint64_t mask = x.last_word_mask();
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto xc = x.column_words(j);
        auto zc = z.column_words(j);
        for (std::size_t w = 0; w < wpc; ++w) {
            zc[w] = ~(xc[w] ^ y_words[w]);
        }
        zc[wpc - 1] &= mask;
    }
    return z;
}

double interaction_strength(const PackedMatrix& x, const PackedMatrix& z,
                            std::size_t j, std::size_t k) {
    if (j >= z.n_cols()) throw data_error("interaction_strength: index j out of range");
    if (k >= x.n_cols()) throw data_error("interaction_strength: index k out of range");
    if (x.n_rows() != z.n_rows()) throw data_error("interaction_strength: row count mismatch");
    const std::size_t agree = count_agreements(z.column_words(j), x.column_words(k), x.n_rows());
    return static_cast<double>(agree) / static_cast<double>(x.n_rows());
}

double weighted_interaction_strength(const PackedMatrix& x, std::span<const double> y,
                                     std::size_t j, std::size_t k) {
    if (j >= x.n_cols() || k >= x.n_cols()) {
        throw data_error("weighted_interaction_strength: column index out of range");
    }
    if (y.size() != x.n_rows()) {
        throw data_error("weighted_interaction_strength: response length mismatch");
    }
    double norm = 0.0;
    for (double v : y) norm += std::abs(v);
    if (norm <= 0.0) throw data_error("weighted_interaction_strength: zero response vector");

    // agree bit i = 1 iff sgn(Y_i) == X_ij * X_ik; with s = sign bits of Y this
    // is xj ^ xk ^ s. Rows with Y_i == 0 get weight 0 regardless of their bit.
    const auto xj = x.column_words(j);
    const auto xk = x.column_words(k);
    const std::size_t n = x.n_rows();
    double agree_sum = 0.0;
    for (std::size_t w = 0; w < xj.size(); ++w) {
        std::uint64_t s = 0;
        const std::size_t base = w * 64;
        const std::size_t hi = std::min<std::size_t>(64, n - base);
        for (std::size_t b = 0; b < hi; ++b) {
            if (y[base + b] > 0.0) s |= std::uint64_t{1} << b;
        }
        std::uint64_t m = xj[w] ^ xk[w] ^ s;
        if (base + 64 > n) m &= x.last_word_mask();
        while (m != 0) {
            const int b = std::countr_zero(m);
            agree_sum += std::abs(y[base + static_cast<std::size_t>(b)]);
            m &= m - 1;
        }
    }
    return agree_sum / norm;
}

PackedMatrix sign_transform(const RealMatrix& x, std::mt19937_64& rng) {
    PackedMatrix out(x.n_rows(), x.n_cols());
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto col = x.column(j);
        for (std::size_t i = 0; i < x.n_rows(); ++i) {
            int s;
            if (col[i] > 0.0) s = +1;
            else if (col[i] < 0.0) s = -1;
            else s = (rng() & 1u) ? +1 : -1;
            out.set(i, j, s);
        }
    }
    return out;
}

PackedMatrix unbiased_transform_sample(const RealMatrix& x, std::mt19937_64& rng) {
    PackedMatrix out(x.n_rows(), x.n_cols());
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto col = x.column(j);
        for (std::size_t i = 0; i < x.n_rows(); ++i) {
            const double v = col[i];
            if (!(v >= -1.0 && v <= 1.0)) {
                throw data_error("unbiased_transform_sample: entry " + std::to_string(v) +
                                 " outside [-1,1]; apply rescale_rows or cap_entries first");
            }
            out.set(i, j, uniform_unit(rng) < (v + 1.0) / 2.0 ? +1 : -1);
        }
    }
    return out;
}

std::pair<RealMatrix, RealVector> rescale_rows(const RealMatrix& x, const RealVector& y) {
    if (y.size() != x.n_rows()) throw data_error("rescale_rows: response length mismatch");
    RealMatrix out(x.n_rows(), x.n_cols());
    RealVector y_out(y.begin(), y.end());
    std::vector<double> nu(x.n_rows(), 0.0);
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto col = x.column(j);
        for (std::size_t i = 0; i < x.n_rows(); ++i) {
            nu[i] = std::max(nu[i], std::abs(col[i]));
        }
    }
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        if (nu[i] == 0.0) {
            throw data_error("rescale_rows: row " + std::to_string(i) + " is all zeros");
        }
        y_out[i] *= nu[i] * nu[i];
    }
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto src = x.column(j);
        auto dst = out.column(j);
        for (std::size_t i = 0; i < x.n_rows(); ++i) dst[i] = src[i] / nu[i];
    }
    return {std::move(out), std::move(y_out)};
}

RealMatrix cap_entries(const RealMatrix& x, double c) {
    if (!(c > 0.0)) throw data_error("cap_entries: cap must be > 0");
    RealMatrix out(x.n_rows(), x.n_cols());
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        const auto src = x.column(j);
        auto dst = out.column(j);
        for (std::size_t i = 0; i < x.n_rows(); ++i) dst[i] = std::clamp(src[i], -c, c);
    }
    return out;
}

} // namespace xyz
