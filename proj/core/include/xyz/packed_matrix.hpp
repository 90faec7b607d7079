#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xyz {

/// Column-major bit-packed sign matrix. Bit 1 encodes +1, bit 0 encodes -1.
/// Every column occupies the same number of 64-bit words; bits at positions
/// >= n_rows are kept at 0 so that XOR/popcount arithmetic over whole words
/// is exact without per-call masking.
class PackedMatrix {
public:
    PackedMatrix() = default;
    PackedMatrix(std::size_t n_rows, std::size_t n_cols);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t words_per_col() const { return words_per_col_; }

    /// Sign at (i, j): +1 or -1.
    int get(std::size_t i, std::size_t j) const {
        const std::uint64_t w = words_[j * words_per_col_ + (i >> 6)];
        return (w >> (i & 63)) & 1u ? +1 : -1;
    }

    void set(std::size_t i, std::size_t j, int sign) {
        std::uint64_t& w = words_[j * words_per_col_ + (i >> 6)];
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (sign > 0) w |= bit; else w &= ~bit;
    }

    std::span<const std::uint64_t> column_words(std::size_t j) const {
        return {words_.data() + j * words_per_col_, words_per_col_};
    }
    std::span<std::uint64_t> column_words(std::size_t j) {
        return {words_.data() + j * words_per_col_, words_per_col_};
    }

    /// Mask covering the valid bits of the last word of a column (all ones
    /// when n_rows is a multiple of 64).
    std::uint64_t last_word_mask() const { return last_word_mask_; }

    /// True if all padding bits are zero. Cheap enough to assert in tests.
    bool padding_clear() const;

    bool operator==(const PackedMatrix& other) const = default;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t words_per_col_ = 0;
    std::uint64_t last_word_mask_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Pack a sign vector (+1/-1 entries) into words, padding bits zero.
std::vector<std::uint64_t> pack_signs(std::span<const std::int8_t> signs);

/// Number of positions where the two columns carry the same sign.
/// Both spans must come from matrices with identical row counts.
std::size_t count_agreements(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b,
                             std::size_t n_rows);

} // namespace xyz
