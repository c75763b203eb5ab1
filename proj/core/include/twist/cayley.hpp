#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twist/gensets.hpp"

namespace twist {

struct BuildLimits {
    std::uint64_t max_elements = 50000000;
    std::uint64_t max_key_bytes = UINT64_MAX;
};

/// Exhaustive breadth-first index of the ball of a given radius in the left
/// Cayley graph: neighbors of g are s*g for generators s, and
/// d(g1, g2) = |g2 g1^-1|. Elements are stored as packed canonical bytes in
/// one arena with open-addressing lookup; ids follow insertion order, so all
/// ids of one sphere are contiguous and the whole structure is deterministic
/// (including across worker counts).
class BallIndex {
public:
    static BallIndex build(const Group& group, GeneratingSet gens, std::int64_t radius,
                           const BuildLimits& limits = BuildLimits{}, int workers = 1);

    const Group& group() const { return *group_; }
    const GeneratingSet& gens() const { return gens_; }
    std::int64_t radius() const { return radius_; }
    std::uint64_t size() const { return offsets_.size() - 1; }
    const std::vector<std::uint64_t>& sphere_sizes() const { return sphere_sizes_; }

    std::optional<std::uint32_t> find(const GroupElement& g) const;
    GroupElement element(std::uint32_t id) const;
    std::int64_t dist(std::uint32_t id) const { return dist_[id]; }
    /// Exact word length, or nullopt for elements outside the ball (a signal,
    /// not a failure).
    std::optional<std::int64_t> distance(const GroupElement& g) const;
    /// Ids on the sphere of radius r as the half-open range [first, second).
    std::pair<std::uint32_t, std::uint32_t> sphere_ids(std::int64_t r) const;
    /// Generator indices whose left-to-right product equals the element.
    std::vector<std::uint32_t> word(std::uint32_t id) const;
    /// s * g for generator index s.
    GroupElement neighbor(std::uint32_t gen_index, const GroupElement& g) const;

    std::uint64_t key_bytes() const { return arena_.size(); }

private:
    BallIndex() = default;

    std::optional<std::uint32_t> find_key(const std::uint8_t* data, std::size_t size,
                                          std::uint64_t hash) const;
    std::uint32_t insert(const std::uint8_t* data, std::size_t size, std::uint64_t hash);
    void rehash(std::size_t capacity);

    const Group* group_ = nullptr;
    GeneratingSet gens_;
    std::int64_t radius_ = 0;
    std::vector<std::uint64_t> sphere_sizes_;
    std::vector<std::uint32_t> level_start_; // id of first element at each distance

    std::vector<std::uint8_t> arena_;
    std::vector<std::uint32_t> offsets_; // size() + 1 entries
    std::vector<std::uint32_t> table_;   // open addressing, id + 1, 0 = empty
    std::uint64_t mask_ = 0;
    std::vector<std::uint16_t> dist_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint16_t> parent_gen_;
};

/// Depth of a stored element: least d such that some h with d(g, h) <= d is
/// strictly farther from the identity. Any neighbor outside the ball is
/// farther than everything stored, so the value is exact for every stored
/// element whenever it is at most `cap`; censored = true reports depth > cap.
struct DepthResult {
    std::int64_t value = 0;
    bool censored = false;
};
DepthResult depth(const BallIndex& ball, std::uint32_t id, std::int64_t cap = 32);

struct DeadEnd {
    std::uint32_t id = 0;
    std::int64_t dist = 0;
    DepthResult depth;
};
/// All dead ends (no generator neighbor strictly farther, i.e. depth >= 2)
/// among stored elements with dist <= max_dist, in id order.
std::vector<DeadEnd> find_dead_ends(const BallIndex& ball, std::int64_t max_dist,
                                    std::int64_t depth_cap = 32);

/// Shortest path length from one stored element to another using generator
/// steps that never leave {h : dist(h) <= r}; nullopt when unreachable
/// within the ball.
std::optional<std::int64_t> interior_distance(const BallIndex& ball, std::uint32_t from,
                                              std::uint32_t to, std::int64_t r);

struct AcxPairResult {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::optional<std::int64_t> interior; // nullopt = unreachable
};

struct AcxLevelResult {
    std::int64_t r = 0;
    std::int64_t pair_count = 0;
    std::int64_t unreachable_pairs = 0;
    std::optional<std::int64_t> max_finite;
    /// Pairs attaining the diagnostic (unreachable ones first when present);
    /// list capped to keep reports small.
    std::vector<AcxPairResult> worst;
};

/// Almost-convexity diagnostic at sphere radius r: enumerate unordered pairs
/// on the sphere joined by at most pair_cap generator steps and measure their
/// interior distance at level r.
AcxLevelResult acx_check(const BallIndex& ball, std::int64_t r, std::int64_t pair_cap = 2);

} // namespace twist
