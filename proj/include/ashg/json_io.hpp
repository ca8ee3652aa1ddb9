#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ashg/errors.hpp"
#include "ashg/game.hpp"
#include "ashg/instances.hpp"
#include "ashg/nearby.hpp"
#include "ashg/partition.hpp"
#include "ashg/repair.hpp"
#include "ashg/simseq.hpp"
#include "ashg/stability.hpp"

namespace ashg {

using Json = nlohmann::json;

/// Largest agent count for which a game is written out pairwise; the huge
/// reduction gadgets would serialize to gigabytes.
inline constexpr int kJsonGameLimit = 2048;

// -- Rational ---------------------------------------------------------------

inline Json rational_to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw input_error("expected a rational ('num/den' string or integer)");
}

// -- Partition ----------------------------------------------------------------

inline Json partition_to_json(const Partition& p) {
    Json out = Json::array();
    for (const auto& c : p.coalitions()) out.push_back(c);
    return out;
}

inline Partition partition_from_json(const Json& j, int n) {
    if (!j.is_array()) throw input_error("partition JSON must be an array of agent-id lists");
    std::vector<std::vector<int>> coals;
    for (const auto& c : j) {
        if (!c.is_array()) throw input_error("coalition must be an array of agent ids");
        coals.push_back(c.get<std::vector<int>>());
    }
    return Partition::of_coalitions(n, coals);
}

// -- Game ---------------------------------------------------------------------

inline Json game_to_json(const Game& g) {
    if (g.n() > kJsonGameLimit)
        throw resource_error("game too large for pairwise JSON serialization",
                             static_cast<std::size_t>(g.n()));
    Json vals = Json::array();
    bool omit_zero = g.cls() == GameClass::General || g.cls() == GameClass::FENG;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = g.symmetric() ? i + 1 : 0; j < g.n(); ++j) {
            if (i == j) continue;
            const Rational& v = g.value(i, j);
            if (omit_zero && v.is_zero()) continue;
            vals.push_back(Json::array({i, j, rational_to_json(v)}));
        }
    }
    return Json{{"n", g.n()},
                {"symmetric", g.symmetric()},
                {"class", game_class_name(g.cls())},
                {"valuations", std::move(vals)}};
}

inline Game game_from_json(const Json& j) {
    if (!j.is_object()) throw input_error("game JSON must be an object");
    int n = j.at("n").get<int>();
    if (n < 1) throw input_error("game needs at least one agent");
    if (n > kJsonGameLimit)
        throw resource_error("game too large for pairwise JSON ingestion", static_cast<std::size_t>(n));
    bool symmetric = j.at("symmetric").get<bool>();
    GameClass cls = game_class_from_name(j.at("class").get<std::string>());
    bool strict_class = cls != GameClass::General && cls != GameClass::FENG;
    std::vector<Rational> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(0));
    std::vector<char> given(table.size(), 0);
    auto at = [&](int a, int b) -> std::size_t {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b);
    };
    for (const auto& entry : j.at("valuations")) {
        if (!entry.is_array() || entry.size() != 3)
            throw input_error("valuation entry must be [i, j, value]");
        int a = entry[0].get<int>(), b = entry[1].get<int>();
        if (a < 0 || a >= n || b < 0 || b >= n || a == b)
            throw input_error("valuation entry references an invalid pair");
        Rational v = rational_from_json(entry[2]);
        if (given[at(a, b)] && !(table[at(a, b)] == v))
            throw input_error("conflicting valuations for one ordered pair");
        table[at(a, b)] = v;
        given[at(a, b)] = 1;
        if (symmetric) {
            if (given[at(b, a)] && !(table[at(b, a)] == v))
                throw input_error("conflicting valuations for a symmetric pair");
            table[at(b, a)] = v;
            given[at(b, a)] = 1;
        }
    }
    if (strict_class) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && !given[at(a, b)])
                    throw input_error("strict classes require every pair; (" + std::to_string(a) +
                                      "," + std::to_string(b) + ") is missing");
    }
    return Game::dense(n, symmetric, cls, std::move(table));
}

// -- UpdateEvent ---------------------------------------------------------------

inline Json update_to_json(const UpdateEvent& u) {
    Json entries = Json::array();
    for (const auto& [i, j, v] : u.entries)
        entries.push_back(Json::array({i, j, rational_to_json(v)}));
    return Json{{"D", u.D}, {"E", u.E}, {"entries", std::move(entries)}};
}

inline UpdateEvent update_from_json(const Json& j) {
    UpdateEvent u;
    u.D = j.at("D").get<std::vector<int>>();
    u.E = j.at("E").get<std::vector<int>>();
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw input_error("update entry must be [i, j, value]");
        u.entries.emplace_back(e[0].get<int>(), e[1].get<int>(), rational_from_json(e[2]));
    }
    return u;
}

// -- AlteredInstance -------------------------------------------------------------

inline Json instance_to_json(const AlteredInstance& inst) {
    return Json{{"game", game_to_json(inst.game)},
                {"partition", partition_to_json(inst.start)},
                {"update", update_to_json(inst.update)},
                {"notion", notion_name(inst.notion)},
                {"k", inst.k}};
}

inline AlteredInstance instance_from_json(const Json& j) {
    AlteredInstance inst;
    inst.game = game_from_json(j.at("game"));
    inst.start = partition_from_json(j.at("partition"), inst.game.n());
    inst.update = update_from_json(j.at("update"));
    inst.notion = notion_from_name(j.at("notion").get<std::string>());
    inst.k = j.at("k").get<int>();
    if (inst.k < 0) throw input_error("distance budget must be nonnegative");
    return inst;
}

// -- SearchOutcome ----------------------------------------------------------------

inline Json outcome_to_json(const SearchOutcome& out) {
    Json j{{"found", out.found}, {"explored", out.explored}};
    if (out.found) {
        j["distance"] = out.distance;
        j["partition"] = partition_to_json(*out.partition);
    }
    return j;
}

// -- Dynamics trace ----------------------------------------------------------------

inline Json step_to_json(const DynamicsStep& s) {
    Json j{{"agent", s.agent},
           {"u_before", rational_to_json(s.u_before)},
           {"u_after", rational_to_json(s.u_after)}};
    if (s.target == Partition::kNewCoalition) j["target"] = "new";
    else j["target"] = s.target;
    return j;
}

/// One step object per line.
inline std::string trace_to_jsonl(const DynamicsTrace& t) {
    std::string out;
    for (const auto& s : t.steps) {
        out += step_to_json(s).dump();
        out += '\n';
    }
    return out;
}

inline Json repair_report_to_json(const RepairReport& r) {
    Json steps = Json::array();
    for (const auto& s : r.steps.steps) steps.push_back(step_to_json(s));
    Json merges = Json::array();
    for (const auto& s : r.merges) merges.push_back(step_to_json(s));
    return Json{{"result", partition_to_json(r.result)},
                {"distance", r.distance},
                {"singleton_delta", r.singleton_delta},
                {"bound", repair_bound_name(r.bound_used)},
                {"steps", std::move(steps)},
                {"merges", std::move(merges)}};
}

// -- Cover instances -----------------------------------------------------------------

inline Json cover_to_json(const CoverInstance& c) {
    Json E = Json::array();
    for (int e = 0; e < c.universe; ++e) E.push_back(e);
    Json j{{"variant", cover_variant_name(c.variant)}, {"E", std::move(E)}, {"sets", c.sets}};
    if (c.variant == CoverVariant::SetCover) j["k"] = c.k;
    return j;
}

inline CoverInstance cover_from_json(const Json& j) {
    CoverInstance c;
    c.variant = cover_variant_from_name(j.at("variant").get<std::string>());
    std::vector<int> elements = j.at("E").get<std::vector<int>>();
    std::set<int> uniq(elements.begin(), elements.end());
    if (uniq.size() != elements.size()) throw input_error("duplicate universe elements");
    // map arbitrary labels to dense indices, preserving the listed order
    std::vector<int> order(elements);
    auto index_of = [&](int label) {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == label) return static_cast<int>(i);
        throw input_error("set element " + std::to_string(label) + " is not in the universe");
    };
    c.universe = static_cast<int>(elements.size());
    for (const auto& s : j.at("sets")) {
        std::vector<int> mapped;
        for (const auto& e : s) mapped.push_back(index_of(e.get<int>()));
        c.sets.push_back(std::move(mapped));
    }
    c.k = j.value("k", 0);
    c.validate();
    return c;
}

// -- Gadget bundles --------------------------------------------------------------------

inline Json bundle_to_json(const GadgetBundle& b) {
    return Json{{"game", game_to_json(b.game)},
                {"partition", partition_to_json(b.start)},
                {"update", update_to_json(b.update)},
                {"notion", notion_name(b.notion)},
                {"budget", b.budget},
                {"provenance", b.provenance}};
}

// -- Sequence reports --------------------------------------------------------------------

inline Json sequence_report_to_json(const SequenceReport& r) {
    Json steps = Json::array();
    for (const auto& st : r.per_step)
        steps.push_back(Json{{"distance", st.distance},
                             {"phi", st.phi},
                             {"sw", rational_to_json(st.sw)}});
    Json j{{"per_step", std::move(steps)},
           {"total_distance", r.total_distance},
           {"policy", r.policy},
           {"completed", r.completed}};
    j["average"] = r.average ? Json(rational_to_json(*r.average)) : Json(nullptr);
    if (!r.completed) j["failure"] = r.failure;
    return j;
}

inline std::string sequence_report_to_csv(const SequenceReport& r) {
    std::string out = "step,distance,phi,sw\n";
    for (std::size_t i = 0; i < r.per_step.size(); ++i) {
        const auto& st = r.per_step[i];
        out += std::to_string(i + 1) + "," + std::to_string(st.distance) + "," +
               std::to_string(st.phi) + "," + st.sw.str() + "\n";
    }
    return out;
}

}  // namespace ashg
