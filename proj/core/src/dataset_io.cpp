#include "xyz/dataset_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <vector>

#include "xyz/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "DatasetFile serialization assumes a little-endian host");

namespace xyz {

namespace {

constexpr char magic[4] = {'X', 'Y', 'Z', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

RealMatrix Dataset::as_real() const {
    if (kind == DatasetKind::real) return real;
    RealMatrix out(packed.n_rows(), packed.n_cols());
    for (std::size_t j = 0; j < packed.n_cols(); ++j) {
        auto col = out.column(j);
        for (std::size_t i = 0; i < packed.n_rows(); ++i) {
            col[i] = static_cast<double>(packed.get(i, j));
        }
    }
    return out;
}

std::vector<std::int8_t> Dataset::sign_column(std::size_t j) const {
    if (kind != DatasetKind::binary) throw data_error("sign_column: dataset is not binary");
    std::vector<std::int8_t> out(packed.n_rows());
    for (std::size_t i = 0; i < packed.n_rows(); ++i) {
        out[i] = static_cast<std::int8_t>(packed.get(i, j));
    }
    return out;
}

RealVector Dataset::real_column(std::size_t j) const {
    if (kind == DatasetKind::real) {
        const auto col = real.column(j);
        return {col.begin(), col.end()};
    }
    RealVector out(packed.n_rows());
    for (std::size_t i = 0; i < packed.n_rows(); ++i) {
        out[i] = static_cast<double>(packed.get(i, j));
    }
    return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("write_dataset: cannot open " + path.string());
    out.write(magic, 4);
    const char kind_byte = static_cast<char>(dataset.kind);
    out.write(&kind_byte, 1);
    const char reserved[3] = {0, 0, 0};
    out.write(reserved, 3);
    write_u64(out, dataset.n_rows());
    write_u64(out, dataset.n_cols());
    if (dataset.kind == DatasetKind::binary) {
        for (std::size_t j = 0; j < dataset.packed.n_cols(); ++j) {
            const auto col = dataset.packed.column_words(j);
            out.write(reinterpret_cast<const char*>(col.data()),
                      static_cast<std::streamsize>(col.size() * sizeof(std::uint64_t)));
        }
    } else {
        for (std::size_t j = 0; j < dataset.real.n_cols(); ++j) {
            const auto col = dataset.real.column(j);
            out.write(reinterpret_cast<const char*>(col.data()),
                      static_cast<std::streamsize>(col.size() * sizeof(double)));
        }
    }
    if (!out) throw data_error("write_dataset: write failed for " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("read_dataset: cannot open " + path.string());
    char head[8];
    in.read(head, 8);
    if (!in || std::memcmp(head, magic, 4) != 0) {
        throw data_error("read_dataset: bad magic in " + path.string());
    }
    const auto kind_byte = static_cast<std::uint8_t>(head[4]);
    if (kind_byte > 1) throw data_error("read_dataset: unknown dataset kind");
    const std::uint64_t n = read_u64(in);
    const std::uint64_t p = read_u64(in);
    if (!in || n == 0 || p == 0) throw data_error("read_dataset: bad header dimensions");

    Dataset dataset;
    dataset.kind = static_cast<DatasetKind>(kind_byte);
    if (dataset.kind == DatasetKind::binary) {
        dataset.packed = PackedMatrix(n, p);
        for (std::size_t j = 0; j < p; ++j) {
            auto col = dataset.packed.column_words(j);
            in.read(reinterpret_cast<char*>(col.data()),
                    static_cast<std::streamsize>(col.size() * sizeof(std::uint64_t)));
            if ((col[col.size() - 1] & ~dataset.packed.last_word_mask()) != 0) {
                throw data_error("read_dataset: nonzero padding bits in " + path.string());
            }
        }
    } else {
        dataset.real = RealMatrix(n, p);
        for (std::size_t j = 0; j < p; ++j) {
            auto col = dataset.real.column(j);
            in.read(reinterpret_cast<char*>(col.data()),
                    static_cast<std::streamsize>(col.size() * sizeof(double)));
        }
    }
    if (!in) throw data_error("read_dataset: truncated payload in " + path.string());
    in.peek();
    if (!in.eof()) throw data_error("read_dataset: trailing bytes in " + path.string());
    return dataset;
}

namespace {

std::vector<std::vector<double>> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("import_csv: cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* ptr = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            while (ptr < end && *ptr == ' ') ++ptr;
            double v = 0.0;
            const auto [next, ec] = std::from_chars(ptr, end, v);
            if (ec != std::errc{}) {
                throw data_error("import_csv: bad number at line " + std::to_string(line_no));
            }
            row.push_back(v);
            ptr = next;
            while (ptr < end && *ptr == ' ') ++ptr;
            if (ptr == end) break;
            if (*ptr != ',') {
                throw data_error("import_csv: expected ',' at line " + std::to_string(line_no));
            }
            ++ptr;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw data_error("import_csv: ragged row at line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("import_csv: no data rows in " + path.string());
    return rows;
}

} // namespace

Dataset import_csv(const std::filesystem::path& path, const CsvImportOptions& options) {
    const auto rows = parse_csv(path);
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();

    Dataset dataset;
    dataset.kind = options.kind;
    if (options.kind == DatasetKind::binary) {
        dataset.packed = PackedMatrix(n, p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                double v = rows[i][j];
                if (options.zero_one_remap) {
                    if (v != 0.0 && v != 1.0) {
                        throw data_error("import_csv: entry not in {0,1} at row " +
                                         std::to_string(i + 1));
                    }
                    v = 2.0 * v - 1.0;
                }
                if (v != 1.0 && v != -1.0) {
                    throw data_error("import_csv: entry not in {-1,1} at row " +
                                     std::to_string(i + 1) +
                                     " (use --zero-one for 0/1 data)");
                }
                dataset.packed.set(i, j, v > 0.0 ? +1 : -1);
            }
        }
    } else {
        dataset.real = RealMatrix(n, p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) dataset.real(i, j) = rows[i][j];
        }
    }
    return dataset;
}

void export_csv(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw data_error("export_csv: cannot open " + path.string());
    const std::size_t n = dataset.n_rows(), p = dataset.n_cols();
    char buf[64];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j > 0) out.put(',');
            if (dataset.kind == DatasetKind::binary) {
                out << dataset.packed.get(i, j);
            } else {
                const int len = std::snprintf(buf, sizeof buf, "%.17g", dataset.real(i, j));
                out.write(buf, len);
            }
        }
        out.put('\n');
    }
    if (!out) throw data_error("export_csv: write failed for " + path.string());
}

} // namespace xyz
