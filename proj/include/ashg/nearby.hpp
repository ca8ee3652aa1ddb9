#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ashg/distance.hpp"
#include "ashg/errors.hpp"
#include "ashg/game.hpp"
#include "ashg/partition.hpp"
#include "ashg/stability.hpp"

namespace ashg {

/// A nearby-stable-partition query: a game, a partition stable in it, an
/// update, the notion to restore, and a distance budget.
struct AlteredInstance {
    Game game;
    Partition start;
    UpdateEvent update;
    Notion notion = Notion::NS;
    int k = 0;
};

struct SearchOutcome {
    bool found = false;
    std::optional<Partition> partition;
    int distance = -1;
    std::size_t explored = 0;
};

inline constexpr std::size_t kDefaultVisitedCap = 10'000'000;

/// Breadth-first traversal of the single-agent-move graph, deduplicated by
/// canonical key, one complete level at a time (each level sorted by key).
/// visit(level, depth) may stop the traversal by returning false. Returns
/// the number of partitions generated across the visited levels.
template <class LevelVisit>
std::size_t for_each_level(const Partition& start, int k, std::size_t visited_cap,
                           LevelVisit&& visit) {
    if (k < 0) throw input_error("distance budget must be nonnegative");
    std::unordered_set<std::string> seen;
    seen.insert(start.key());
    std::vector<Partition> level{start};
    std::size_t count = 1;
    if (!visit(static_cast<const std::vector<Partition>&>(level), 0)) return count;
    for (int depth = 1; depth <= k && !level.empty(); ++depth) {
        std::vector<Partition> next;
        for (const Partition& p : level) {
            for (int agent = 0; agent < p.n(); ++agent) {
                int own = p.coalition_of(agent);
                for (int target = 0; target <= p.coalition_count(); ++target) {
                    Partition child;
                    if (target == p.coalition_count()) {
                        if (p.members(own).size() == 1) continue;
                        child = p.move(agent, Partition::kNewCoalition);
                    } else {
                        if (target == own) continue;
                        child = p.move(agent, target);
                    }
                    if (!seen.insert(child.key()).second) continue;
                    if (seen.size() > visited_cap)
                        throw resource_error("visited-set cap exceeded while enumerating partitions",
                                             count);
                    next.push_back(std::move(child));
                }
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const Partition& a, const Partition& b) { return a.key() < b.key(); });
        count += next.size();
        if (!visit(static_cast<const std::vector<Partition>&>(next), depth)) return count;
        level = std::move(next);
    }
    return count;
}

/// Streaming view of for_each_level: visit(partition, depth) once per
/// distinct partition (the start included at depth 0), depths nondecreasing,
/// canonical key order within a level. The callback may stop the stream.
template <class Visit>
std::size_t for_each_within(const Partition& start, int k, std::size_t visited_cap, Visit&& visit) {
    std::size_t skipped = 0;  // partitions generated but never visited
    std::size_t total = for_each_level(
        start, k, visited_cap, [&](const std::vector<Partition>& level, int depth) {
            for (std::size_t i = 0; i < level.size(); ++i) {
                if (!visit(static_cast<const Partition&>(level[i]), depth)) {
                    skipped = level.size() - i - 1;
                    return false;
                }
            }
            return true;
        });
    return total - skipped;
}

/// Materialized variant of for_each_within.
inline std::vector<std::pair<Partition, int>> enumerate_within(
    const Partition& start, int k, std::size_t visited_cap = kDefaultVisitedCap) {
    std::vector<std::pair<Partition, int>> out;
    for_each_within(start, k, visited_cap, [&](const Partition& p, int d) {
        out.emplace_back(p, d);
        return true;
    });
    return out;
}

namespace detail {

inline void require_instance_promise(const AlteredInstance& inst) {
    if (inst.start.n() != inst.game.n())
        throw input_error("instance partition does not match the game");
    if (!is_stable(inst.game, inst.start, inst.notion))
        throw contract_error("instance start partition is not " + notion_name(inst.notion) +
                             "-stable in the original game");
}

}  // namespace detail

/// Exact solver: streams partitions within distance k of the start (BFS, so
/// the first hit is at minimal distance; canonical order breaks ties) and
/// returns the first notion-stable one in the updated game. `jobs` > 1
/// parallelizes the stability scan inside each BFS level; the outcome is
/// identical to the serial one.
inline SearchOutcome nearest_stable(const AlteredInstance& inst,
                                    std::size_t visited_cap = kDefaultVisitedCap, int jobs = 1) {
    detail::require_instance_promise(inst);
    Game altered = inst.game.with_update(inst.update);
    SearchOutcome out;
    if (jobs <= 1) {
        out.explored = for_each_within(inst.start, inst.k, visited_cap, [&](const Partition& p, int d) {
            if (is_stable(altered, p, inst.notion)) {
                out.found = true;
                out.partition = p;
                out.distance = d;
                return false;
            }
            return true;
        });
        return out;
    }
    // Parallel variant: scan each complete level in chunks concurrently and
    // take the lowest-index hit. The outcome (including the explored count,
    // which stops at the winner) matches the serial scan.
    std::size_t seen_before_level = 0;
    std::size_t total = for_each_level(
        inst.start, inst.k, visited_cap, [&](const std::vector<Partition>& level, int depth) {
            std::size_t chunk = (level.size() + static_cast<std::size_t>(jobs) - 1) /
                                static_cast<std::size_t>(jobs);
            std::vector<std::future<std::size_t>> futs;
            for (int t = 0; t < jobs; ++t) {
                std::size_t lo = static_cast<std::size_t>(t) * chunk;
                if (lo >= level.size()) break;
                std::size_t hi = std::min(level.size(), lo + chunk);
                futs.push_back(std::async(std::launch::async, [&, lo, hi]() -> std::size_t {
                    for (std::size_t idx = lo; idx < hi; ++idx)
                        if (is_stable(altered, level[idx], inst.notion)) return idx;
                    return level.size();
                }));
            }
            std::size_t best = level.size();
            for (auto& f : futs) best = std::min(best, f.get());
            if (best < level.size()) {
                out.found = true;
                out.partition = level[best];
                out.distance = depth;
                out.explored = seen_before_level + best + 1;
                return false;
            }
            seen_before_level += level.size();
            return true;
        });
    if (!out.found) out.explored = total;
    return out;
}

/// Iterates every set partition of 0..n-1 in restricted-growth-string order.
/// rgs[i] may be incremented iff rgs[i] <= max(rgs[0..i-1]).
template <class F>
void for_each_set_partition(int n, F&& f) {
    if (n < 1) throw input_error("partition needs at least one agent");
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    std::vector<int> pmax(static_cast<std::size_t>(n), 0);  // pmax[i] = max(rgs[0..i-1]); pmax[0] = -1
    while (true) {
        f(static_cast<const std::vector<int>&>(rgs));
        int run = -1;
        for (int i = 0; i < n; ++i) {
            pmax[static_cast<std::size_t>(i)] = run;
            run = std::max(run, rgs[static_cast<std::size_t>(i)]);
        }
        int i = n - 1;
        while (i > 0 && rgs[static_cast<std::size_t>(i)] > pmax[static_cast<std::size_t>(i)]) --i;
        if (i == 0) return;
        ++rgs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) rgs[static_cast<std::size_t>(j)] = 0;
    }
}

/// Every x-stable set partition of the agent set, canonical (RGS) order.
/// Guarded by a cap because the count grows with Bell(n).
inline std::vector<Partition> enumerate_all_stable(const Game& g, Notion x, int n_cap = 10) {
    if (g.n() > n_cap)
        throw resource_error("agent count exceeds the exhaustive-enumeration cap", 0);
    std::vector<Partition> out;
    for_each_set_partition(g.n(), [&](const std::vector<int>& rgs) {
        Partition p = Partition::of_assignment(rgs);
        if (is_stable(g, p, x)) out.push_back(std::move(p));
    });
    return out;
}

}  // namespace ashg
