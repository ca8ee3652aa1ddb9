#pragma once

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ashg/distance.hpp"
#include "ashg/errors.hpp"
#include "ashg/game.hpp"
#include "ashg/nearby.hpp"
#include "ashg/repair.hpp"
#include "ashg/stability.hpp"

namespace ashg {

/// A sequence of single-pair valuation updates applied to an initially
/// stable configuration.
struct UpdateSequence {
    Game game;
    Partition start;
    std::vector<UpdateEvent> updates;
    Notion notion = Notion::NS;
};

struct SequenceStep {
    int distance = 0;
    int phi = 0;
    Rational sw;                 // social welfare of the repaired partition
    Rational sw_after_update;    // social welfare of the old partition in the new game
    Rational sw_before_update;   // social welfare of the old partition in the old game
    std::vector<Rational> deviation_sw_deltas;  // per recorded dynamics step
};

struct SequenceReport {
    std::vector<SequenceStep> per_step;
    long long total_distance = 0;
    std::optional<Rational> average;  // absent for empty sequences
    std::string policy;
    bool completed = true;  // false when a step failed (budget exhausted)
    std::string failure;
};

struct CloseCnsPolicy {};
struct CisDynamicsPolicy {
    DynamicsPolicy dynamics = FirstInOrder{};
};
struct NearestStablePolicy {
    int k_max = 3;
    std::size_t visited_cap = kDefaultVisitedCap;
};
struct GreedyDynamicsPolicy {};
using SequencePolicy =
    std::variant<CloseCnsPolicy, CisDynamicsPolicy, NearestStablePolicy, GreedyDynamicsPolicy>;

inline std::string sequence_policy_name(const SequencePolicy& p) {
    if (std::holds_alternative<CloseCnsPolicy>(p)) return "close-cns";
    if (std::holds_alternative<CisDynamicsPolicy>(p)) return "cis";
    if (const auto* np = std::get_if<NearestStablePolicy>(&p))
        return "nearest:" + std::to_string(np->k_max);
    return "greedy";
}

/// Applies each update in turn, repairs stability with the chosen policy,
/// and records per-step distance, singleton count and social welfare.
inline SequenceReport run_sequence(const UpdateSequence& seq, const SequencePolicy& policy) {
    if (!is_stable(seq.game, seq.start, seq.notion))
        throw contract_error("sequence start partition is not stable for its notion");
    if (std::holds_alternative<CloseCnsPolicy>(policy) && seq.notion != Notion::CNS)
        throw contract_error("the close-cns policy repairs the cns notion only");
    if (std::holds_alternative<CisDynamicsPolicy>(policy) && seq.notion != Notion::CIS)
        throw contract_error("the cis-dynamics policy repairs the cis notion only");
    if (std::holds_alternative<GreedyDynamicsPolicy>(policy) && !seq.game.symmetric() &&
        seq.notion != Notion::CIS)
        throw contract_error(
            "greedy dynamics need a symmetric game or the cis notion (welfare potential)");

    SequenceReport rep;
    rep.policy = sequence_policy_name(policy);
    Game cur_game = seq.game;
    Partition cur = seq.start;
    for (const UpdateEvent& u : seq.updates) {
        SequenceStep st;
        st.sw_before_update = social_welfare(cur_game, cur);
        Game next_game = cur_game.with_update(u);
        st.sw_after_update = social_welfare(next_game, cur);
        Partition repaired = cur;
        bool failed = false;
        if (std::holds_alternative<CloseCnsPolicy>(policy)) {
            auto [a, b, v] = u.single_pair();
            RepairReport r = close_cns(cur_game, cur, {a, b}, v);
            repaired = r.result;
            for (const auto& s : r.steps.steps)
                st.deviation_sw_deltas.push_back((s.u_after - s.u_before) * Rational(2));
        } else if (const auto* cp = std::get_if<CisDynamicsPolicy>(&policy)) {
            auto [a, b, v] = u.single_pair();
            RepairReport r = cis_repair(cur_game, cur, {a, b}, v, cp->dynamics);
            repaired = r.result;
            for (const auto& s : r.steps.steps)
                st.deviation_sw_deltas.push_back((s.u_after - s.u_before) * Rational(2));
        } else if (const auto* np = std::get_if<NearestStablePolicy>(&policy)) {
            AlteredInstance inst{cur_game, cur, u, seq.notion, np->k_max};
            SearchOutcome out = nearest_stable(inst, np->visited_cap);
            if (!out.found) {
                rep.completed = false;
                rep.failure = "no stable partition within the distance budget";
                failed = true;
            } else {
                repaired = *out.partition;
            }
        } else {
            DynamicsTrace t = run_dynamics(next_game, cur, seq.notion, FirstInOrder{});
            if (!t.converged) {
                rep.completed = false;
                rep.failure = "dynamics did not converge within the step cap";
                failed = true;
            } else {
                repaired = t.final;
                // replay the trace to record the exact welfare delta per move
                Partition walk = cur;
                Rational sw_prev = st.sw_after_update;
                for (const auto& s : t.steps) {
                    walk = walk.move(s.agent, s.target);
                    Rational sw_next = social_welfare(next_game, walk);
                    st.deviation_sw_deltas.push_back(sw_next - sw_prev);
                    sw_prev = std::move(sw_next);
                }
            }
        }
        if (failed) break;
        st.distance = partition_distance(cur, repaired);
        st.phi = repaired.count_singletons();
        st.sw = social_welfare(next_game, repaired);
        rep.total_distance += st.distance;
        rep.per_step.push_back(std::move(st));
        cur_game = std::move(next_game);
        cur = std::move(repaired);
    }
    if (!rep.per_step.empty())
        rep.average = Rational(rep.total_distance, static_cast<std::int64_t>(rep.per_step.size()));
    return rep;
}

/// Random single-pair update sequence: pairs uniform, new values drawn from
/// the palette minus the pair's current value. Deterministic in the seed.
inline UpdateSequence gen_update_sequence(const Game& g0, const Partition& start, Notion notion,
                                          int m, std::uint64_t seed,
                                          std::vector<Rational> palette = {}) {
    if (m < 0) throw input_error("sequence length must be nonnegative");
    if (palette.empty()) palette = default_palette(g0.cls(), g0.n());
    UpdateSequence seq;
    seq.game = g0;
    seq.start = start;
    seq.notion = notion;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> agent(0, g0.n() - 1);
    Game cur = g0;
    for (int step = 0; step < m; ++step) {
        UpdateEvent u;
        bool made = false;
        for (int attempt = 0; attempt < 64 && !made; ++attempt) {
            int i = agent(rng), j = agent(rng);
            if (i == j) continue;
            if (g0.symmetric() && i > j) std::swap(i, j);
            std::vector<Rational> legal;
            for (const Rational& v : palette)
                if (!(v == cur.value(i, j))) legal.push_back(v);
            if (legal.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
            u = UpdateEvent{{i}, {j}, {{i, j, legal[pick(rng)]}}};
            made = true;
        }
        if (!made) throw input_error("no legal update found for the palette");
        cur = cur.with_update(u);
        seq.updates.push_back(std::move(u));
    }
    return seq;
}

struct AuditViolation {
    int step = -1;
    std::string what;
};

struct AuditResult {
    bool ok = true;
    std::vector<AuditViolation> violations;
};

/// Re-derives the welfare ledger of a dynamics-driven run on a
/// friends/enemies/neutral game: deviations must raise welfare by at least
/// 2 (symmetric) or 1 (non-symmetric contractual runs), updates may lower
/// it by at most 4 (or 2), welfare stays within +-n(n-1), and the total
/// deviation count fits the amortized budget.
inline AuditResult potential_audit(const SequenceReport& rep, int n, bool symmetric) {
    AuditResult res;
    auto flag = [&](int step, const std::string& what) {
        res.ok = false;
        res.violations.push_back({step, what});
    };
    const Rational dev_min = symmetric ? Rational(2) : Rational(1);
    const Rational upd_min = symmetric ? Rational(-4) : Rational(-2);
    const Rational sw_cap(static_cast<std::int64_t>(n) * (n - 1));
    std::size_t deviations = 0;
    for (std::size_t i = 0; i < rep.per_step.size(); ++i) {
        const SequenceStep& st = rep.per_step[i];
        if (st.sw_after_update - st.sw_before_update < upd_min)
            flag(static_cast<int>(i), "update lowered social welfare below the class bound");
        for (const Rational& d : st.deviation_sw_deltas)
            if (d < dev_min) flag(static_cast<int>(i), "deviation raised social welfare too little");
        if (st.sw > sw_cap || -sw_cap > st.sw)
            flag(static_cast<int>(i), "social welfare left the class range");
        deviations += st.deviation_sw_deltas.size();
    }
    // amortized count: total rise per deviation vs. total drop per update
    std::size_t m = rep.per_step.size();
    double budget = symmetric
                        ? (2.0 * n * (n - 1) + 4.0 * static_cast<double>(m)) / 2.0
                        : (2.0 * n * (n - 1) + 2.0 * static_cast<double>(m));
    if (static_cast<double>(deviations) > budget)
        flag(-1, "more deviations than the potential argument allows");
    return res;
}

}  // namespace ashg
