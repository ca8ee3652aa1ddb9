#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ashg/distance.hpp"
#include "ashg/errors.hpp"
#include "ashg/game.hpp"
#include "ashg/nearby.hpp"
#include "ashg/partition.hpp"
#include "ashg/stability.hpp"

namespace ashg {

enum class RepairBound { GeneralCNS, OneNegativeCNS, Cis };

inline std::string repair_bound_name(RepairBound b) {
    switch (b) {
        case RepairBound::GeneralCNS: return "general-cns";
        case RepairBound::OneNegativeCNS: return "one-negative-cns";
        case RepairBound::Cis: return "cis";
    }
    return "general-cns";
}

struct RepairReport {
    Partition result;
    int distance = 0;
    int singleton_delta = 0;  // singleton count before minus after
    RepairBound bound_used = RepairBound::GeneralCNS;
    DynamicsTrace steps;
    // Forced coalition merges need not improve the merged agent; they are
    // kept out of the dynamics trace (whose steps all strictly improve).
    std::vector<DynamicsStep> merges;

    std::vector<int> movers() const {
        std::vector<int> out;
        for (const auto& s : merges) out.push_back(s.agent);
        for (const auto& s : steps.steps) out.push_back(s.agent);
        return out;
    }
};

namespace detail {

inline void require_strict_symmetric(const Game& g, const char* who) {
    if (!g.symmetric()) throw contract_error(std::string(who) + " needs a symmetric game");
    if (!g.is_strict_values()) throw contract_error(std::string(who) + " needs a strict game");
}

inline Game apply_pair_update(const Game& g, std::pair<int, int> pair, const Rational& value) {
    UpdateEvent u;
    u.D = {pair.first};
    u.E = {pair.second};
    u.entries.emplace_back(pair.first, pair.second, value);
    return g.with_update(u);
}

/// The CNS move the repair loop prescribes for x: the largest coalition x
/// can contractually deviate to with strictly positive post-move utility;
/// the empty coalition when every eligible target is nonpositive.
inline std::optional<int> repair_move_target(const Game& g, const Partition& p, int x) {
    int own = p.coalition_of(x);
    Rational u_cur = coalition_value(g, p.members(own), x);
    if (!detail::exit_weakly_helps_all(g, p.members(own), x)) return std::nullopt;
    std::optional<int> best;
    std::size_t best_size = 0;
    bool any = false;
    for (int c = 0; c < p.coalition_count(); ++c) {
        if (c == own) continue;
        Rational u_new = coalition_value(g, p.members(c), x);
        if (!(u_new > u_cur)) continue;
        any = true;
        if (u_new.sign() > 0 && p.members(c).size() > best_size) {
            best = c;
            best_size = p.members(c).size();
        }
    }
    if (p.members(own).size() > 1 && Rational(0) > u_cur) any = true;
    if (!any) return std::nullopt;
    if (best) return best;
    // No positive-utility target: the empty coalition (utility 0) must be
    // the improving move, which requires a strictly negative current utility.
    if (u_cur.sign() >= 0 || p.members(own).size() == 1)
        return std::nullopt;
    return Partition::kNewCoalition;
}

}  // namespace detail

/// Constructive contractual-Nash repair for a single symmetric pair update
/// in a strict symmetric game. Guarantees a CNS partition of the altered
/// game within distance 4 + (singletons before) - (singletons after).
inline RepairReport close_cns(const Game& g, const Partition& p, std::pair<int, int> pair,
                              const Rational& new_value) {
    detail::require_strict_symmetric(g, "close_cns");
    if (new_value.is_zero()) throw contract_error("close_cns: replacement value must keep the game strict");
    if (!is_stable(g, p, Notion::CNS)) throw contract_error("close_cns: start partition is not cns-stable");
    int a = pair.first, b = pair.second;
    if (a == b || a < 0 || b < 0 || a >= g.n() || b >= g.n())
        throw input_error("close_cns: invalid agent pair");

    Game altered = detail::apply_pair_update(g, pair, new_value);
    RepairReport rep;
    rep.bound_used = RepairBound::GeneralCNS;
    Partition cur = p;

    if (p.coalition_of(a) == p.coalition_of(b) && new_value.sign() < 0) {
        for (int x : {a, b}) {
            // merge with a positive-valuation singleton when one exists
            std::optional<int> mate;
            for (int s = 0; s < g.n(); ++s) {
                if (s == x) continue;
                if (cur.members(cur.coalition_of(s)).size() != 1) continue;
                if (altered.value(x, s).sign() > 0 && (!mate || s < *mate)) mate = s;
            }
            if (mate) {
                DynamicsStep ms;
                ms.agent = *mate;
                ms.source = cur.members(cur.coalition_of(*mate));
                ms.target = cur.coalition_of(x);
                ms.u_before = utility(altered, cur, *mate);
                cur = cur.move(*mate, cur.coalition_of(x));
                ms.u_after = utility(altered, cur, *mate);
                rep.merges.push_back(std::move(ms));
                continue;
            }
            if (auto target = detail::repair_move_target(altered, cur, x)) {
                DynamicsStep ds;
                ds.agent = x;
                ds.source = cur.members(cur.coalition_of(x));
                ds.target = *target;
                ds.u_before = utility(altered, cur, x);
                cur = cur.move(x, *target);
                ds.u_after = utility(altered, cur, x);
                rep.steps.steps.push_back(std::move(ds));
            }
        }
    }

    DynamicsTrace tail = run_dynamics(altered, cur, Notion::CNS, FirstInOrder{});
    if (!tail.converged)
        throw contract_error("close_cns: dynamics failed to converge within the step cap");
    for (auto& s : tail.steps) rep.steps.steps.push_back(std::move(s));
    rep.steps.converged = true;
    rep.steps.final = tail.final;
    rep.result = tail.final;
    rep.distance = partition_distance(p, rep.result);
    rep.singleton_delta = p.count_singletons() - rep.result.count_singletons();
    if (rep.distance > 4 + rep.singleton_delta)
        throw contract_error("close_cns: distance bound violated (construction bug)");
    return rep;
}

/// Contractual-individual repair: run the deviation dynamics from the start
/// partition in the altered game; any policy converges within distance 3.
inline RepairReport cis_repair(const Game& g, const Partition& p, std::pair<int, int> pair,
                               const Rational& new_value, const DynamicsPolicy& policy) {
    detail::require_strict_symmetric(g, "cis_repair");
    if (new_value.is_zero()) throw contract_error("cis_repair: replacement value must keep the game strict");
    if (!is_stable(g, p, Notion::CIS)) throw contract_error("cis_repair: start partition is not cis-stable");
    Game altered = detail::apply_pair_update(g, pair, new_value);
    DynamicsTrace trace = run_dynamics(altered, p, Notion::CIS, policy);
    if (!trace.converged)
        throw contract_error("cis_repair: dynamics failed to converge within the step cap");
    RepairReport rep;
    rep.bound_used = RepairBound::Cis;
    rep.result = trace.final;
    rep.distance = partition_distance(p, rep.result);
    rep.singleton_delta = p.count_singletons() - rep.result.count_singletons();
    rep.steps = std::move(trace);
    if (rep.distance > 3) throw contract_error("cis_repair: distance bound violated (construction bug)");
    return rep;
}

namespace detail {

/// Nearest stable partition among those within `cap` moves, by level;
/// exact and polynomial because cap is a small constant.
inline SearchOutcome nearest_within_levels(const Game& altered, const Partition& start, Notion x,
                                           int cap) {
    SearchOutcome out;
    out.explored = for_each_within(start, cap, kDefaultVisitedCap, [&](const Partition& q, int d) {
        if (is_stable(altered, q, x)) {
            out.found = true;
            out.partition = q;
            out.distance = d;
            return false;
        }
        return true;
    });
    return out;
}

}  // namespace detail

/// Polynomial-time exact decider for single-pair symmetric updates under
/// the contractual-individual notion in strict games: distances below the
/// repair guarantee are enumerated, the guarantee covers the rest.
inline SearchOutcome decide_cis_111_sym(const AlteredInstance& inst) {
    if (inst.notion != Notion::CIS) throw contract_error("decide_cis_111_sym handles the cis notion only");
    detail::require_strict_symmetric(inst.game, "decide_cis_111_sym");
    auto [a, b, v] = inst.update.single_pair();
    if (!is_stable(inst.game, inst.start, Notion::CIS))
        throw contract_error("decide_cis_111_sym: start partition is not cis-stable");
    Game altered = inst.game.with_update(inst.update);
    int probe = std::min(inst.k, 2);
    SearchOutcome near = detail::nearest_within_levels(altered, inst.start, Notion::CIS, probe);
    if (near.found || inst.k < 3) return near;
    RepairReport rep = cis_repair(inst.game, inst.start, {a, b}, v, FirstInOrder{});
    SearchOutcome out;
    out.found = true;
    out.partition = rep.result;
    out.distance = rep.distance;  // = 3 here: distances 0..2 were exhausted
    out.explored = near.explored;
    return out;
}

/// Polynomial-time exact decider for the contractual-Nash notion when the
/// altered game has at most one distinct negative value (e.g. the
/// friends/enemies and appreciation/aversion classes).
inline SearchOutcome decide_cns_111_sym_one_negative(const AlteredInstance& inst) {
    if (inst.notion != Notion::CNS)
        throw contract_error("decide_cns_111_sym_one_negative handles the cns notion only");
    detail::require_strict_symmetric(inst.game, "decide_cns_111_sym_one_negative");
    auto [a, b, v] = inst.update.single_pair();
    if (!is_stable(inst.game, inst.start, Notion::CNS))
        throw contract_error("decide_cns_111_sym_one_negative: start partition is not cns-stable");
    Game altered = inst.game.with_update(inst.update);
    if (altered.distinct_negative_values().size() > 1)
        throw contract_error(
            "decide_cns_111_sym_one_negative: more than one negative value present; "
            "use nearest_stable instead");
    int probe = std::min(inst.k, 3);
    SearchOutcome near = detail::nearest_within_levels(altered, inst.start, Notion::CNS, probe);
    if (near.found || inst.k < 4) return near;
    RepairReport rep = close_cns(inst.game, inst.start, {a, b}, v);
    if (rep.distance > 4)
        throw contract_error("one-negative repair exceeded distance 4 (construction bug)");
    SearchOutcome out;
    out.found = true;
    out.partition = rep.result;
    out.distance = rep.distance;  // = 4 here: distances 0..3 were exhausted
    out.explored = near.explored;
    return out;
}

}  // namespace ashg
