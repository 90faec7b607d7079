#include "xyz/pair_search.hpp"

#include <algorithm>
#include <cmath>

#include "xyz/errors.hpp"

namespace xyz {

namespace {

struct KeyEntry {
    std::uint64_t key;
    std::uint32_t index;
    std::uint8_t side;  // 0 = x, 1 = z

    bool operator<(const KeyEntry& o) const {
        if (key != o.key) return key < o.key;
        if (side != o.side) return side < o.side;
        return index < o.index;
    }
};

} // namespace

CandidatePairSet equal_pairs(std::span<const ProjectionKey> x_keys,
                             std::span<const ProjectionKey> z_keys) {
    std::vector<KeyEntry> entries;
    entries.reserve(x_keys.size() + z_keys.size());
    for (const auto& k : x_keys) entries.push_back({k.key, k.column, 0});
    for (const auto& k : z_keys) entries.push_back({k.key, k.column, 1});
    std::sort(entries.begin(), entries.end());

    CandidatePairSet out;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t run_end = i + 1;
        while (run_end < entries.size() && entries[run_end].key == entries[i].key) ++run_end;
        // Sides are contiguous within a run (x before z).
        std::size_t split = i;
        while (split < run_end && entries[split].side == 0) ++split;
        if (split > i && split < run_end) {
            PairBlock block;
            block.x_indices.reserve(split - i);
            block.z_indices.reserve(run_end - split);
            for (std::size_t t = i; t < split; ++t) block.x_indices.push_back(entries[t].index);
            for (std::size_t t = split; t < run_end; ++t) block.z_indices.push_back(entries[t].index);
            out.total_pairs += static_cast<std::uint64_t>(block.x_indices.size()) *
                               static_cast<std::uint64_t>(block.z_indices.size());
            out.groups.push_back(std::move(block));
        }
        i = run_end;
    }
    return out;
}

CandidatePairSet close_pairs(const RealVector& x, const RealVector& z, double tau) {
    if (!(tau >= 0.0)) throw data_error("close_pairs: tau must be >= 0");

    std::vector<std::uint32_t> x_order(x.size()), z_order(z.size());
    for (std::uint32_t i = 0; i < x.size(); ++i) x_order[i] = i;
    for (std::uint32_t i = 0; i < z.size(); ++i) z_order[i] = i;
    std::sort(x_order.begin(), x_order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });
    std::sort(z_order.begin(), z_order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return z[a] != z[b] ? z[a] < z[b] : a < b;
    });

    CandidatePairSet out;
    std::size_t lo = 0, hi = 0;
    for (const std::uint32_t j : x_order) {
        const double v = x[j];
        while (lo < z_order.size() && z[z_order[lo]] < v - tau) ++lo;
        if (hi < lo) hi = lo;
        while (hi < z_order.size() && z[z_order[hi]] <= v + tau) ++hi;
        if (lo == hi) continue;
        PairBlock block;
        block.x_indices.push_back(j);
        block.z_indices.assign(z_order.begin() + static_cast<std::ptrdiff_t>(lo),
                               z_order.begin() + static_cast<std::ptrdiff_t>(hi));
        std::sort(block.z_indices.begin(), block.z_indices.end());
        out.total_pairs += block.z_indices.size();
        out.groups.push_back(std::move(block));
    }
    return out;
}

} // namespace xyz
