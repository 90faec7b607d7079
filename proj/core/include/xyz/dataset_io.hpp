#pragma once

#include <filesystem>
#include <string>

#include "xyz/packed_matrix.hpp"
#include "xyz/real_matrix.hpp"

namespace xyz {

enum class DatasetKind : std::uint8_t { binary = 0, real = 1 };

/// In-memory dataset backed by the on-disk format: header (magic "XYZ1",
/// kind byte, n and p as 64-bit little-endian counts) followed by bit-packed
/// columns (binary) or column-major little-endian doubles (real).
struct Dataset {
    DatasetKind kind = DatasetKind::binary;
    PackedMatrix packed;  // valid when kind == binary
    RealMatrix real;      // valid when kind == real

    std::size_t n_rows() const {
        return kind == DatasetKind::binary ? packed.n_rows() : real.n_rows();
    }
    std::size_t n_cols() const {
        return kind == DatasetKind::binary ? packed.n_cols() : real.n_cols();
    }

    /// Binary data as +-1 doubles (copies); real data as-is.
    RealMatrix as_real() const;
    /// Column j as +-1 int8 signs; binary datasets only.
    std::vector<std::int8_t> sign_column(std::size_t j) const;
    /// Column j as doubles.
    RealVector real_column(std::size_t j) const;
};

void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);

struct CsvImportOptions {
    DatasetKind kind = DatasetKind::real;
    bool zero_one_remap = false;  // accept {0,1} and store as 2x-1 (binary only)
};

/// Strict rectangular comma-separated numbers, one observation per row.
Dataset import_csv(const std::filesystem::path& path, const CsvImportOptions& options);

/// Doubles are written with max_digits10 precision so a real round trip is
/// bit-exact.
void export_csv(const std::filesystem::path& path, const Dataset& dataset);

} // namespace xyz
