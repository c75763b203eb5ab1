#include "twist/cayley.hpp"

#include <algorithm>
#include <cstring>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace twist {

namespace {

constexpr std::uint16_t kNoGen = 0xffff;
constexpr std::size_t kChunk = 1 << 15;

struct Candidate {
    std::uint32_t offset; // into the worker's byte buffer
    std::uint32_t length;
    std::uint32_t parent;
    std::uint16_t gen;
};

struct WorkerOutput {
    std::vector<std::uint8_t> bytes;
    std::vector<Candidate> cands;
};

} // namespace

GroupElement BallIndex::neighbor(std::uint32_t gen_index, const GroupElement& g) const {
    return group_->multiply(gens_.entries[gen_index].g, g);
}

std::optional<std::uint32_t> BallIndex::find_key(const std::uint8_t* data, std::size_t size,
                                                 std::uint64_t hash) const {
    std::uint64_t slot = hash & mask_;
    while (true) {
        std::uint32_t stored = table_[slot];
        if (stored == 0) return std::nullopt;
        std::uint32_t id = stored - 1;
        std::uint32_t begin = offsets_[id], end = offsets_[id + 1];
        if (end - begin == size && std::memcmp(arena_.data() + begin, data, size) == 0)
            return id;
        slot = (slot + 1) & mask_;
    }
}

void BallIndex::rehash(std::size_t capacity) {
    table_.assign(capacity, 0);
    mask_ = capacity - 1;
    for (std::uint32_t id = 0; id < size(); ++id) {
        std::uint32_t begin = offsets_[id], end = offsets_[id + 1];
        std::uint64_t h = hash_bytes(arena_.data() + begin, end - begin);
        std::uint64_t slot = h & mask_;
        while (table_[slot] != 0) slot = (slot + 1) & mask_;
        table_[slot] = id + 1;
    }
}

std::uint32_t BallIndex::insert(const std::uint8_t* data, std::size_t size, std::uint64_t hash) {
    std::uint64_t slot = hash & mask_;
    while (true) {
        std::uint32_t stored = table_[slot];
        if (stored == 0) break;
        std::uint32_t id = stored - 1;
        std::uint32_t begin = offsets_[id], end = offsets_[id + 1];
        if (end - begin == size && std::memcmp(arena_.data() + begin, data, size) == 0)
            return id;
        slot = (slot + 1) & mask_;
    }
    std::uint32_t id = static_cast<std::uint32_t>(this->size());
    if (arena_.size() + size > UINT32_MAX)
        throw ResourceLimitError("element arena exceeded 4 GiB", this->size(), -1);
    arena_.insert(arena_.end(), data, data + size);
    offsets_.push_back(static_cast<std::uint32_t>(arena_.size()));
    table_[slot] = id + 1;
    if ((static_cast<std::uint64_t>(id) + 1) * 10 >= static_cast<std::uint64_t>(table_.size()) * 7)
        rehash(table_.size() * 2);
    return id;
}

std::optional<std::uint32_t> BallIndex::find(const GroupElement& g) const {
    std::vector<std::uint8_t> buf;
    group_->pack(g, buf);
    return find_key(buf.data(), buf.size(), hash_bytes(buf.data(), buf.size()));
}

GroupElement BallIndex::element(std::uint32_t id) const {
    std::uint32_t begin = offsets_[id], end = offsets_[id + 1];
    return group_->unpack(arena_.data() + begin, end - begin);
}

std::optional<std::int64_t> BallIndex::distance(const GroupElement& g) const {
    std::optional<std::uint32_t> id = find(g);
    if (!id) return std::nullopt;
    return dist_[*id];
}

std::pair<std::uint32_t, std::uint32_t> BallIndex::sphere_ids(std::int64_t r) const {
    if (r < 0 || r > radius_) throw InvalidInputError("sphere radius outside the ball");
    std::uint32_t begin = level_start_[static_cast<std::size_t>(r)];
    std::uint32_t end = r + 1 < static_cast<std::int64_t>(level_start_.size())
                            ? level_start_[static_cast<std::size_t>(r) + 1]
                            : static_cast<std::uint32_t>(size());
    return {begin, end};
}

std::vector<std::uint32_t> BallIndex::word(std::uint32_t id) const {
    std::vector<std::uint32_t> out;
    while (parent_gen_[id] != kNoGen) {
        out.push_back(parent_gen_[id]);
        id = parent_[id];
    }
    return out;
}

BallIndex BallIndex::build(const Group& group, GeneratingSet gens, std::int64_t radius,
                           const BuildLimits& limits, int workers) {
    if (radius < 0 || radius > 60000) throw InvalidInputError("radius out of range");
    if (limits.max_elements > 4000000000ull)
        throw InvalidInputError("element cap exceeds the 32-bit id space");
    if (!gens.closed_under_inverse)
        throw InvalidInputError("generating set must be closed under inversion");
    if (workers < 1) workers = 1;

    BallIndex ball;
    ball.group_ = &group;
    ball.gens_ = std::move(gens);
    ball.radius_ = radius;
    ball.offsets_.push_back(0);
    ball.rehash(1 << 12);

    {
        std::vector<std::uint8_t> buf;
        group.pack(group.identity(), buf);
        ball.insert(buf.data(), buf.size(), hash_bytes(buf.data(), buf.size()));
        ball.dist_.push_back(0);
        ball.parent_.push_back(0);
        ball.parent_gen_.push_back(kNoGen);
    }
    ball.sphere_sizes_.assign(1, 1);
    ball.level_start_.assign(1, 0);

    const std::size_t gen_count = ball.gens_.size();
    std::uint32_t level_begin = 0, level_end = 1;

    for (std::int64_t r = 1; r <= radius; ++r) {
        ball.level_start_.push_back(level_end);
        std::uint64_t added = 0;

        for (std::uint32_t chunk_begin = level_begin; chunk_begin < level_end;
             chunk_begin += kChunk) {
            const std::uint32_t chunk_end =
                std::min<std::uint64_t>(chunk_begin + kChunk, level_end);
            const std::uint32_t chunk_size = chunk_end - chunk_begin;

            // Generation is pure; partition the chunk across workers and merge
            // the outputs in partition order so ids never depend on the worker
            // count.
            const int nw = static_cast<int>(
                std::min<std::uint64_t>(workers, std::max<std::uint32_t>(chunk_size / 64, 1)));
            std::vector<WorkerOutput> outputs(nw);
            auto produce = [&](int w) {
                WorkerOutput& out = outputs[w];
                const std::uint32_t begin = chunk_begin + chunk_size * w / nw;
                const std::uint32_t end = chunk_begin + chunk_size * (w + 1) / nw;
                std::vector<std::uint8_t> buf;
                for (std::uint32_t u = begin; u < end; ++u) {
                    GroupElement g = ball.element(u);
                    for (std::size_t s = 0; s < gen_count; ++s) {
                        GroupElement h = ball.group_->multiply(ball.gens_.entries[s].g, g);
                        buf.clear();
                        ball.group_->pack(h, buf);
                        out.cands.push_back(Candidate{
                            static_cast<std::uint32_t>(out.bytes.size()),
                            static_cast<std::uint32_t>(buf.size()), u,
                            static_cast<std::uint16_t>(s)});
                        out.bytes.insert(out.bytes.end(), buf.begin(), buf.end());
                    }
                }
            };
            if (nw == 1) {
                produce(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(nw);
                for (int w = 0; w < nw; ++w) pool.emplace_back(produce, w);
                for (auto& t : pool) t.join();
            }

            for (const WorkerOutput& out : outputs) {
                for (const Candidate& c : out.cands) {
                    const std::uint8_t* data = out.bytes.data() + c.offset;
                    std::uint64_t h = hash_bytes(data, c.length);
                    std::uint32_t before = static_cast<std::uint32_t>(ball.size());
                    std::uint32_t id = ball.insert(data, c.length, h);
                    if (id == before) {
                        ball.dist_.push_back(static_cast<std::uint16_t>(r));
                        ball.parent_.push_back(c.parent);
                        ball.parent_gen_.push_back(c.gen);
                        ++added;
                        if (ball.size() > limits.max_elements ||
                            ball.arena_.size() > limits.max_key_bytes) {
                            throw ResourceLimitError(
                                "ball construction hit the memory budget", ball.size(), r - 1);
                        }
                    }
                }
            }
        }

        ball.sphere_sizes_.push_back(added);
        level_begin = level_end;
        level_end = static_cast<std::uint32_t>(ball.size());
        if (added == 0) {
            // The generated subgroup is exhausted; remaining spheres are empty.
            for (std::int64_t rr = r + 1; rr <= radius; ++rr) {
                ball.sphere_sizes_.push_back(0);
                ball.level_start_.push_back(level_end);
            }
            break;
        }
    }
    return ball;
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

namespace {

/// Breadth-first walk from one stored element. Neighbors outside the ball are
/// reported through `escape`; stored neighbors go through `visit` which
/// returns false to stop the walk.
template <typename Visit, typename Escape>
void walk(const BallIndex& ball, std::uint32_t start, std::int64_t max_level, Visit&& visit,
          Escape&& escape) {
    std::unordered_set<std::uint32_t> seen{start};
    std::vector<std::uint32_t> frontier{start}, next;
    for (std::int64_t level = 1; level <= max_level && !frontier.empty(); ++level) {
        next.clear();
        for (std::uint32_t u : frontier) {
            GroupElement g = ball.element(u);
            for (std::uint32_t s = 0; s < ball.gens().size(); ++s) {
                GroupElement h = ball.neighbor(s, g);
                std::optional<std::uint32_t> id = ball.find(h);
                if (!id) {
                    if (!escape(level)) return;
                    continue;
                }
                if (!seen.insert(*id).second) continue;
                if (!visit(*id, level)) return;
                next.push_back(*id);
            }
        }
        frontier.swap(next);
    }
}

} // namespace

DepthResult depth(const BallIndex& ball, std::uint32_t id, std::int64_t cap) {
    const std::int64_t n = ball.dist(id);
    DepthResult result{cap, true};
    walk(
        ball, id, cap,
        [&](std::uint32_t v, std::int64_t level) {
            if (ball.dist(v) > n) {
                result = DepthResult{level, false};
                return false;
            }
            return true;
        },
        [&](std::int64_t level) {
            // outside the ball means farther than everything stored
            result = DepthResult{level, false};
            return false;
        });
    return result;
}

std::vector<DeadEnd> find_dead_ends(const BallIndex& ball, std::int64_t max_dist,
                                    std::int64_t depth_cap) {
    std::vector<DeadEnd> out;
    const std::uint64_t count = ball.size();
    for (std::uint32_t id = 0; id < count; ++id) {
        const std::int64_t n = ball.dist(id);
        if (n > max_dist) break; // ids are ordered by distance
        if (n == 0) continue;
        GroupElement g = ball.element(id);
        bool dead = true;
        for (std::uint32_t s = 0; s < ball.gens().size() && dead; ++s) {
            std::optional<std::uint32_t> v = ball.find(ball.neighbor(s, g));
            if (!v || ball.dist(*v) > n) dead = false;
        }
        if (dead) out.push_back(DeadEnd{id, n, depth(ball, id, depth_cap)});
    }
    return out;
}

std::optional<std::int64_t> interior_distance(const BallIndex& ball, std::uint32_t from,
                                              std::uint32_t to, std::int64_t r) {
    if (ball.dist(from) > r || ball.dist(to) > r)
        throw InvalidInputError("interior_distance endpoints lie outside the level");
    if (from == to) return 0;
    std::optional<std::int64_t> found;
    walk(
        ball, from, INT64_MAX,
        [&](std::uint32_t v, std::int64_t level) {
            if (ball.dist(v) > r) return true; // outside the region, do not expand
            if (v == to) {
                found = level;
                return false;
            }
            return true;
        },
        [](std::int64_t) { return true; });
    return found;
}

AcxLevelResult acx_check(const BallIndex& ball, std::int64_t r, std::int64_t pair_cap) {
    if (r > ball.radius() - 1) throw InvalidInputError("acx_check needs r <= radius - 1");
    if (pair_cap < 1) throw InvalidInputError("pair cap must be >= 1");
    AcxLevelResult result;
    result.r = r;

    auto [begin, end] = ball.sphere_ids(r);
    constexpr std::size_t kWorstCap = 64;

    for (std::uint32_t g1 = begin; g1 < end; ++g1) {
        // partners: sphere elements reachable by <= pair_cap generator steps,
        // counted once per unordered pair
        std::unordered_set<std::uint32_t> partners;
        {
            std::vector<GroupElement> layer{ball.element(g1)}, next;
            std::unordered_set<std::string> seen{ball.group().key(layer[0])};
            for (std::int64_t step = 1; step <= pair_cap; ++step) {
                next.clear();
                for (const GroupElement& g : layer)
                    for (std::uint32_t s = 0; s < ball.gens().size(); ++s) {
                        GroupElement h = ball.neighbor(s, g);
                        if (!seen.insert(ball.group().key(h)).second) continue;
                        next.push_back(h);
                        std::optional<std::uint32_t> id = ball.find(h);
                        if (id && *id > g1 && ball.dist(*id) == r) partners.insert(*id);
                    }
                layer.swap(next);
            }
        }
        if (partners.empty()) continue;

        // one restricted BFS resolves all partners of g1
        std::size_t unresolved = partners.size();
        std::unordered_map<std::uint32_t, std::optional<std::int64_t>> reached;
        for (std::uint32_t p : partners) reached.emplace(p, std::nullopt);
        walk(
            ball, g1, INT64_MAX,
            [&](std::uint32_t v, std::int64_t level) {
                if (ball.dist(v) > r) return true;
                auto it = reached.find(v);
                if (it != reached.end() && !it->second) {
                    it->second = level;
                    if (--unresolved == 0) return false;
                }
                return true;
            },
            [](std::int64_t) { return true; });

        std::vector<std::uint32_t> ordered(partners.begin(), partners.end());
        std::sort(ordered.begin(), ordered.end());
        for (std::uint32_t g2 : ordered) {
            const std::optional<std::int64_t>& interior = reached.at(g2);
            ++result.pair_count;
            if (!interior) {
                // unreachable pairs dominate any finite detour
                if (result.unreachable_pairs == 0) result.worst.clear();
                ++result.unreachable_pairs;
                if (result.worst.size() < kWorstCap)
                    result.worst.push_back(AcxPairResult{g1, g2, interior});
            } else if (!result.max_finite || *interior > *result.max_finite) {
                result.max_finite = *interior;
                if (result.unreachable_pairs == 0) {
                    result.worst.clear();
                    result.worst.push_back(AcxPairResult{g1, g2, interior});
                }
            } else if (result.unreachable_pairs == 0 && *interior == *result.max_finite) {
                if (result.worst.size() < kWorstCap)
                    result.worst.push_back(AcxPairResult{g1, g2, interior});
            }
        }
    }
    return result;
}

} // namespace twist
