#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ashg/errors.hpp"
#include "ashg/game.hpp"
#include "ashg/partition.hpp"
#include "ashg/rational.hpp"

namespace ashg {

/// The four single-agent stability notions.
enum class Notion { NS, IS, CNS, CIS };

inline std::string notion_name(Notion x) {
    switch (x) {
        case Notion::NS: return "ns";
        case Notion::IS: return "is";
        case Notion::CNS: return "cns";
        case Notion::CIS: return "cis";
    }
    return "ns";
}

inline Notion notion_from_name(const std::string& s) {
    if (s == "ns") return Notion::NS;
    if (s == "is") return Notion::IS;
    if (s == "cns") return Notion::CNS;
    if (s == "cis") return Notion::CIS;
    throw input_error("unknown stability notion '" + s + "'");
}

/// Which deviation kinds a move realizes. Nonempty sets always contain NS;
/// CIS holds exactly when IS and CNS both hold.
struct DeviationKinds {
    bool ns = false, is = false, cns = false, cis = false;

    bool empty() const { return !ns; }
    bool has(Notion x) const {
        switch (x) {
            case Notion::NS: return ns;
            case Notion::IS: return is;
            case Notion::CNS: return cns;
            case Notion::CIS: return cis;
        }
        return false;
    }
    bool operator==(const DeviationKinds&) const = default;
};

struct ClassifiedDeviation {
    int agent = -1;
    int target = Partition::kNewCoalition;  // pre-move coalition index, or kNewCoalition
    DeviationKinds kinds;
};

/// Sum of i's valuations toward the members of a coalition (i excluded).
inline Rational coalition_value(const Game& g, const std::vector<int>& members, int i) {
    Rational u;
    for (int j : members)
        if (j != i) u += g.value(i, j);
    return u;
}

inline Rational utility(const Game& g, const Partition& p, int i) {
    if (i < 0 || i >= g.n()) throw input_error("agent id out of range");
    if (p.n() != g.n()) throw input_error("partition does not match the game's agent count");
    return coalition_value(g, p.members(p.coalition_of(i)), i);
}

inline Rational social_welfare(const Game& g, const Partition& p) {
    Rational sw;
    for (int i = 0; i < g.n(); ++i) sw += utility(g, p, i);
    return sw;
}

namespace detail {

/// Joining adds v(j,i) to each target member j; leaving removes v(j,i) from
/// each abandoned member j. The contractual/individual conditions reduce to
/// sign checks on those deltas.
inline bool join_weakly_helps_all(const Game& g, const std::vector<int>& target, int i) {
    for (int j : target)
        if (g.value(j, i).sign() < 0) return false;
    return true;
}

inline bool exit_weakly_helps_all(const Game& g, const std::vector<int>& own, int i) {
    for (int j : own)
        if (j != i && g.value(j, i).sign() > 0) return false;
    return true;
}

}  // namespace detail

/// Classifies the move of agent i to an existing coalition (pre-move index)
/// or to a fresh singleton. Empty result: the move is not a Nash deviation.
inline DeviationKinds classify_deviation(const Game& g, const Partition& p, int i, int target) {
    if (i < 0 || i >= g.n()) throw input_error("agent id out of range");
    int own = p.coalition_of(i);
    if (target == Partition::kNewCoalition) {
        if (p.members(own).size() == 1) throw input_error("new-singleton move from a singleton is a no-op");
    } else {
        if (target < 0 || target >= p.coalition_count()) throw input_error("target coalition out of range");
        if (target == own) throw input_error("target equals current coalition");
    }
    Rational u_cur = coalition_value(g, p.members(own), i);
    Rational u_new =
        target == Partition::kNewCoalition ? Rational(0) : coalition_value(g, p.members(target), i);
    DeviationKinds k;
    if (!(u_new > u_cur)) return k;
    k.ns = true;
    k.is = target == Partition::kNewCoalition || detail::join_weakly_helps_all(g, p.members(target), i);
    k.cns = detail::exit_weakly_helps_all(g, p.members(own), i);
    k.cis = k.is && k.cns;
    return k;
}

namespace detail {

/// Histogram-based utilities for block-backed games: the value of agent i
/// toward coalition c is the block-count weighted sum plus the corrections
/// from i's exception row, O(blocks + exceptions) instead of O(|c|).
class BlockUtilities {
public:
    BlockUtilities(const Game& g, const Partition& p) : g_(g), p_(p) {
        int nb = g.block_count();
        hist_.assign(static_cast<std::size_t>(p.coalition_count()),
                     std::vector<int>(static_cast<std::size_t>(nb), 0));
        for (int i = 0; i < g.n(); ++i)
            ++hist_[static_cast<std::size_t>(p.coalition_of(i))][static_cast<std::size_t>(g.block_of(i))];
    }

    /// Sum of i's valuations toward coalition c's members (i excluded).
    Rational toward(int i, int c) const {
        const auto& h = hist_[static_cast<std::size_t>(c)];
        int bi = g_.block_of(i);
        Rational u;
        for (int b = 0; b < g_.block_count(); ++b) {
            int count = h[static_cast<std::size_t>(b)];
            if (b == bi && p_.coalition_of(i) == c) --count;
            if (count == 0) continue;
            u += g_.block_value(bi, b) * Rational(count);
        }
        for (const auto& [j, v] : g_.exception_row(i))
            if (j != i && p_.coalition_of(j) == c) u += v - g_.block_value(bi, g_.block_of(j));
        return u;
    }

private:
    const Game& g_;
    const Partition& p_;
    std::vector<std::vector<int>> hist_;
};

template <class Utility>
bool stable_scan(const Game& g, const Partition& p, Notion x, Utility&& toward) {
    for (int i = 0; i < g.n(); ++i) {
        int own = p.coalition_of(i);
        const auto& mine = p.members(own);
        Rational u_cur = toward(i, own);
        std::optional<bool> exit_ok;  // computed on demand for CNS/CIS
        auto check = [&](int target) -> bool {
            Rational u_new = target == Partition::kNewCoalition ? Rational(0) : toward(i, target);
            if (!(u_new > u_cur)) return false;
            if (x == Notion::NS) return true;
            bool need_is = x == Notion::IS || x == Notion::CIS;
            bool need_cns = x == Notion::CNS || x == Notion::CIS;
            if (need_is && target != Partition::kNewCoalition &&
                !detail::join_weakly_helps_all(g, p.members(target), i))
                return false;
            if (need_cns) {
                if (!exit_ok) exit_ok = detail::exit_weakly_helps_all(g, mine, i);
                if (!*exit_ok) return false;
            }
            return true;
        };
        for (int c = 0; c < p.coalition_count(); ++c) {
            if (c == own) continue;
            if (check(c)) return false;
        }
        if (mine.size() > 1 && check(Partition::kNewCoalition)) return false;
    }
    return true;
}

}  // namespace detail

/// True iff no agent has a deviation of kind x to any coalition or to a
/// fresh singleton.
inline bool is_stable(const Game& g, const Partition& p, Notion x) {
    if (p.n() != g.n()) throw input_error("partition does not match the game's agent count");
    if (g.uses_blocks()) {
        detail::BlockUtilities u(g, p);
        return detail::stable_scan(g, p, x, [&](int i, int c) { return u.toward(i, c); });
    }
    return detail::stable_scan(g, p, x, [&](int i, int c) {
        return coalition_value(g, p.members(c), i);
    });
}

/// Stability of all four notions in one sweep (indexable by Notion).
inline std::array<bool, 4> stability_profile(const Game& g, const Partition& p) {
    std::array<bool, 4> stable{true, true, true, true};
    auto all_decided = [&] { return !stable[0] && !stable[1] && !stable[2] && !stable[3]; };
    for (int i = 0; i < g.n() && !all_decided(); ++i) {
        int own = p.coalition_of(i);
        const auto& mine = p.members(own);
        Rational u_cur = coalition_value(g, mine, i);
        std::optional<bool> exit_ok;
        auto feed = [&](int target) {
            Rational u_new = target == Partition::kNewCoalition
                                 ? Rational(0)
                                 : coalition_value(g, p.members(target), i);
            if (!(u_new > u_cur)) return;
            stable[0] = false;
            bool join_ok = target == Partition::kNewCoalition ||
                           detail::join_weakly_helps_all(g, p.members(target), i);
            if (!exit_ok) exit_ok = detail::exit_weakly_helps_all(g, mine, i);
            if (join_ok) stable[1] = false;
            if (*exit_ok) stable[2] = false;
            if (join_ok && *exit_ok) stable[3] = false;
        };
        for (int c = 0; c < p.coalition_count() && !all_decided(); ++c) {
            if (c == own) continue;
            feed(c);
        }
        if (mine.size() > 1 && !all_decided()) feed(Partition::kNewCoalition);
    }
    return stable;
}

inline int notion_index(Notion x) { return static_cast<int>(x); }

/// All moves whose kinds include x, in deterministic order: ascending agent,
/// then targets in canonical coalition order with the fresh singleton last.
inline std::vector<ClassifiedDeviation> enumerate_deviations(const Game& g, const Partition& p,
                                                             Notion x) {
    std::vector<ClassifiedDeviation> out;
    for (int i = 0; i < g.n(); ++i) {
        int own = p.coalition_of(i);
        for (int c = 0; c < p.coalition_count(); ++c) {
            if (c == own) continue;
            DeviationKinds k = classify_deviation(g, p, i, c);
            if (k.has(x)) out.push_back({i, c, k});
        }
        if (p.members(own).size() > 1) {
            DeviationKinds k = classify_deviation(g, p, i, Partition::kNewCoalition);
            if (k.has(x)) out.push_back({i, Partition::kNewCoalition, k});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deviation dynamics

struct FirstInOrder {};
struct LargestTargetCoalition {};
struct RandomPolicy {
    std::uint64_t seed = 0;
};
using DynamicsPolicy = std::variant<FirstInOrder, LargestTargetCoalition, RandomPolicy>;

inline std::string policy_name(const DynamicsPolicy& p) {
    if (std::holds_alternative<FirstInOrder>(p)) return "first-in-order";
    if (std::holds_alternative<LargestTargetCoalition>(p)) return "largest-target";
    return "random:" + std::to_string(std::get<RandomPolicy>(p).seed);
}

struct DynamicsStep {
    int agent = -1;
    std::vector<int> source;  // the abandoned coalition, pre-move
    int target = Partition::kNewCoalition;  // pre-move coalition index, or kNewCoalition
    Rational u_before, u_after;
};

struct DynamicsTrace {
    std::vector<DynamicsStep> steps;
    bool converged = false;
    Partition final;
};

inline std::size_t default_max_steps(int n) {
    return 10u * static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

/// Applies one x-deviation at a time, chosen by the policy, until none is
/// left or max_steps is hit. Non-convergence is reported, not thrown.
inline DynamicsTrace run_dynamics(const Game& g, const Partition& p0, Notion x,
                                  const DynamicsPolicy& policy, std::size_t max_steps) {
    DynamicsTrace trace;
    Partition cur = p0;
    std::optional<std::mt19937_64> rng;
    if (const auto* rp = std::get_if<RandomPolicy>(&policy)) rng.emplace(rp->seed);
    for (std::size_t step = 0; step < max_steps; ++step) {
        std::vector<ClassifiedDeviation> moves = enumerate_deviations(g, cur, x);
        if (moves.empty()) {
            trace.converged = true;
            trace.final = cur;
            return trace;
        }
        const ClassifiedDeviation* pick = &moves.front();
        if (std::holds_alternative<LargestTargetCoalition>(policy)) {
            std::size_t best = 0;
            for (const auto& m : moves) {
                std::size_t sz =
                    m.target == Partition::kNewCoalition ? 0 : cur.members(m.target).size();
                if (sz > best) { best = sz; pick = &m; }
            }
        } else if (rng) {
            std::uniform_int_distribution<std::size_t> d(0, moves.size() - 1);
            pick = &moves[d(*rng)];
        }
        DynamicsStep s;
        s.agent = pick->agent;
        s.source = cur.members(cur.coalition_of(pick->agent));
        s.target = pick->target;
        s.u_before = utility(g, cur, pick->agent);
        cur = cur.move(pick->agent, pick->target);
        s.u_after = utility(g, cur, pick->agent);
        trace.steps.push_back(std::move(s));
    }
    trace.converged = enumerate_deviations(g, cur, x).empty();
    trace.final = cur;
    return trace;
}

inline DynamicsTrace run_dynamics(const Game& g, const Partition& p0, Notion x,
                                  const DynamicsPolicy& policy) {
    return run_dynamics(g, p0, x, policy, default_max_steps(g.n()));
}

}  // namespace ashg
