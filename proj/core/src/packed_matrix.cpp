#include "xyz/packed_matrix.hpp"

#include <bit>

#include "xyz/errors.hpp"

namespace xyz {

PackedMatrix::PackedMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      words_per_col_((n_rows + 63) / 64),
      words_(words_per_col_ * n_cols, 0) {
    if (n_rows == 0 || n_cols == 0) {
        throw data_error("PackedMatrix: n_rows and n_cols must be >= 1");
    }
    const std::size_t tail = n_rows & 63;
    last_word_mask_ = tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;
}

bool PackedMatrix::padding_clear() const {
    for (std::size_t j = 0; j < n_cols_; ++j) {
        const auto col = column_words(j);
        if ((col[words_per_col_ - 1] & ~last_word_mask_) != 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> pack_signs(std::span<const std::int8_t> signs) {
    std::vector<std::uint64_t> words((signs.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] > 0) words[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return words;
}

std::size_t count_agreements(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b,
                             std::size_t n_rows) {
    // Padding bits are zero in both columns, so they never contribute to the
    // XOR and the disagreement count is exact.
    std::size_t disagree = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        disagree += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
    }
    return n_rows - disagree;
}

} // namespace xyz
