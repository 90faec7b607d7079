#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "xyz/projection.hpp"

namespace xyz {

/// One group of colliding columns: every (x, z) combination in the block is a
/// candidate pair.
struct PairBlock {
    std::vector<std::uint32_t> x_indices;
    std::vector<std::uint32_t> z_indices;
};

/// Candidate pairs as a union of Cartesian products. Within one search each
/// (j,k) appears in at most one block; total_pairs = sum |x|*|z|.
struct CandidatePairSet {
    std::vector<PairBlock> groups;
    std::uint64_t total_pairs = 0;
};

/// A pair that survived the strength filter. j indexes the X column, k the
/// Z column; sign is -1 when the pair was found in the negated-response pass.
struct InteractionHit {
    std::uint32_t j = 0;
    std::uint32_t k = 0;
    double strength = 0.0;
    std::uint32_t found_at_repetition = 0;
    int sign = +1;
};

/// Pairs already strength-checked in this search invocation. In unordered
/// mode (j,k) and (k,j) are the same pair, which is what the orchestrator
/// wants since interaction strength is symmetric.
class PairSeenSet {
public:
    enum class Keying { oriented, unordered };

    explicit PairSeenSet(Keying keying = Keying::oriented) : keying_(keying) {}

    bool contains(std::uint32_t j, std::uint32_t k) const { return set_.contains(encode(j, k)); }
    void insert(std::uint32_t j, std::uint32_t k) { set_.insert(encode(j, k)); }
    void insert_key(std::uint64_t key) { set_.insert(key); }
    std::size_t size() const { return set_.size(); }

    std::uint64_t encode(std::uint32_t j, std::uint32_t k) const {
        if (keying_ == Keying::unordered && k < j) std::swap(j, k);
        return (static_cast<std::uint64_t>(j) << 32) | k;
    }

private:
    Keying keying_;
    std::unordered_set<std::uint64_t> set_;
};

/// All pairs (j,k) with x_keys[j].key == z_keys[k].key, found by sorting the
/// concatenation. O(p log p) plus the number of blocks; the pairs themselves
/// are never materialized.
CandidatePairSet equal_pairs(std::span<const ProjectionKey> x_keys,
                             std::span<const ProjectionKey> z_keys);

/// All pairs with |x_j - z_k| <= tau, via sorting both vectors and sweeping a
/// window. Used by the dense-projection baseline.
CandidatePairSet close_pairs(const RealVector& x, const RealVector& z, double tau);

struct FilterResult {
    std::vector<InteractionHit> hits;
    std::uint64_t evaluated = 0;   // strength computations performed
    std::uint64_t enumerated = 0;  // candidate pairs in the set
    bool aborted = false;          // candidate guard tripped, repetition skipped
};

/// Evaluate candidate strengths lazily over the blocks, skipping pairs already
/// in `seen`, and emit hits with strength >= gamma. Every newly evaluated pair
/// is added to `seen` (and appended to newly_seen when given, so a caller
/// working on a snapshot can merge it back). If the set holds more than
/// max_candidates pairs the repetition is abandoned up front (aborted = true)
/// rather than silently truncated.
template <typename StrengthFn>
FilterResult filter_strong(const CandidatePairSet& candidates, StrengthFn&& strength_of,
                           double gamma, PairSeenSet& seen, std::uint64_t max_candidates,
                           std::uint32_t repetition, int sign = +1,
                           bool skip_equal_indices = false,
                           std::vector<std::uint64_t>* newly_seen = nullptr) {
    FilterResult result;
    result.enumerated = candidates.total_pairs;
    if (candidates.total_pairs > max_candidates) {
        result.aborted = true;
        return result;
    }
    for (const PairBlock& block : candidates.groups) {
        for (const std::uint32_t j : block.x_indices) {
            for (const std::uint32_t k : block.z_indices) {
                if (skip_equal_indices && j == k) continue;
                if (seen.contains(j, k)) continue;
                seen.insert(j, k);
                if (newly_seen != nullptr) newly_seen->push_back(seen.encode(j, k));
                const double s = strength_of(j, k);
                ++result.evaluated;
                if (s >= gamma) {
                    result.hits.push_back({j, k, s, repetition, sign});
                }
            }
        }
    }
    return result;
}

} // namespace xyz
