#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "ashg/instances.hpp"
#include "ashg/json_io.hpp"
#include "ashg/simseq.hpp"
#include "oracles.hpp"

using ashg::Game;
using ashg::GameClass;
using ashg::Notion;
using ashg::Partition;
using ashg::Rational;
using ashg::SequenceReport;
using ashg::UpdateSequence;

namespace {

Partition stable_start(const Game& g, Notion x) {
    auto trace = ashg::run_dynamics(g, Partition::singletons(g.n()), Notion::NS,
                                    ashg::FirstInOrder{});
    REQUIRE(trace.converged);
    REQUIRE(ashg::is_stable(g, trace.final, x));
    return trace.final;
}

}  // namespace

TEST_CASE("an empty sequence reports no average") {
    Game g = ashg::gen_random_game(5, GameClass::FENG, true, 2);
    UpdateSequence seq{g, stable_start(g, Notion::NS), {}, Notion::NS};
    SequenceReport rep = ashg::run_sequence(seq, ashg::GreedyDynamicsPolicy{});
    CHECK(rep.per_step.empty());
    CHECK(rep.total_distance == 0);
    CHECK_FALSE(rep.average.has_value());
    CHECK(rep.completed);
}

TEST_CASE("generated sequences are deterministic and stay in class") {
    Game g = ashg::gen_random_game(8, GameClass::FENG, true, 3);
    Partition p = stable_start(g, Notion::NS);
    UpdateSequence a = ashg::gen_update_sequence(g, p, Notion::NS, 200, 11);
    UpdateSequence b = ashg::gen_update_sequence(g, p, Notion::NS, 200, 11);
    REQUIRE(a.updates.size() == 200);
    Game cur = g;
    for (std::size_t i = 0; i < a.updates.size(); ++i) {
        CHECK(ashg::update_to_json(a.updates[i]) == ashg::update_to_json(b.updates[i]));
        cur = cur.with_update(a.updates[i]);  // class validation runs inside
        CHECK(a.updates[i].entries.size() == 1);
    }
    CHECK(cur.cls() == GameClass::FENG);
}

TEST_CASE("friends/enemies palettes always flip the sign") {
    Game g = ashg::gen_random_game(6, GameClass::FEG, true, 5);
    Partition p = stable_start(g, Notion::NS);
    UpdateSequence seq = ashg::gen_update_sequence(g, p, Notion::NS, 60, 7);
    Game cur = g;
    for (const auto& u : seq.updates) {
        auto [i, j, v] = u.single_pair();
        CHECK(v == (cur.value(i, j) == Rational(1) ? Rational(-1) : Rational(1)));
        cur = cur.with_update(u);
    }
}

TEST_CASE("greedy repair keeps every step stable and the ledger within bounds") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 6;
        Game g = ashg::gen_random_game(n, GameClass::FENG, true, rng());
        Partition p0 = stable_start(g, Notion::NS);
        UpdateSequence seq = ashg::gen_update_sequence(g, p0, Notion::NS, 120, rng());
        SequenceReport rep = ashg::run_sequence(seq, ashg::GreedyDynamicsPolicy{});
        REQUIRE(rep.completed);
        REQUIRE(rep.per_step.size() == 120);

        long long total = 0;
        for (const auto& st : rep.per_step) {
            total += st.distance;
            // welfare window for the class
            Rational cap(static_cast<std::int64_t>(n) * (n - 1));
            CHECK(!(st.sw > cap));
            CHECK(!(Rational(-1) * cap > st.sw));
        }
        CHECK(total == rep.total_distance);

        auto audit = ashg::potential_audit(rep, n, true);
        CHECK(audit.ok);
        // every deviation raised welfare by >= 2, every update cost >= -4
        for (const auto& st : rep.per_step) {
            CHECK(!(st.sw_after_update - st.sw_before_update < Rational(-4)));
            for (const auto& d : st.deviation_sw_deltas) CHECK(!(d < Rational(2)));
        }
    }
}

TEST_CASE("close-cns sequences satisfy the singleton-count ledger") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 7;
        Game g = ashg::gen_random_game(n, GameClass::Strict, true, rng());
        Partition p0 = stable_start(g, Notion::CNS);
        UpdateSequence seq = ashg::gen_update_sequence(g, p0, Notion::CNS, 150, rng());
        SequenceReport rep = ashg::run_sequence(seq, ashg::CloseCnsPolicy{});
        REQUIRE(rep.completed);
        long long m = static_cast<long long>(rep.per_step.size());
        int phi0 = p0.count_singletons();
        int phim = rep.per_step.back().phi;
        CHECK(rep.total_distance <= 4 * m + phi0 - phim);
        // average within the slack bound
        CHECK(*rep.average <= Rational(4) + Rational(n, m));
    }
}

TEST_CASE("cis-dynamics sequences keep every step within distance three") {
    std::mt19937_64 rng(19);
    Game g = ashg::gen_random_game(7, GameClass::Strict, true, rng());
    Partition p0 = stable_start(g, Notion::CIS);
    UpdateSequence seq = ashg::gen_update_sequence(g, p0, Notion::CIS, 100, rng());
    SequenceReport rep = ashg::run_sequence(seq, ashg::CisDynamicsPolicy{});
    REQUIRE(rep.completed);
    for (const auto& st : rep.per_step) CHECK(st.distance <= 3);
    CHECK(*rep.average <= Rational(3));
}

TEST_CASE("the alternating hub sequence forces distance n/2 every step") {
    for (int n : {6, 8, 10}) {
        auto [down, up] = ashg::build_fig5_updown(n);
        // each side admits exactly one stable partition, so the forced
        // per-step distance is pinned
        auto only_down = ashg::enumerate_all_stable(down.game, Notion::IS);
        auto only_up = ashg::enumerate_all_stable(up.game, Notion::IS);
        REQUIRE(only_down.size() == 1);
        REQUIRE(only_up.size() == 1);
        CHECK(ashg::partition_distance(only_down.front(), only_up.front()) == n / 2);
        // the split partition is not stable once the hubs turn friendly
        CHECK_FALSE(ashg::enumerate_deviations(up.game, down.start, Notion::NS).empty());

        UpdateSequence seq;
        seq.game = down.game;
        seq.start = down.start;
        seq.notion = Notion::IS;
        int steps = n == 6 ? 50 : 20;
        for (int i = 0; i < steps; ++i) seq.updates.push_back(i % 2 == 0 ? down.update : up.update);
        SequenceReport rep =
            ashg::run_sequence(seq, ashg::NearestStablePolicy{n / 2, ashg::kDefaultVisitedCap});
        REQUIRE(rep.completed);
        REQUIRE(rep.per_step.size() == static_cast<std::size_t>(steps));
        for (const auto& st : rep.per_step) CHECK(st.distance == n / 2);
        CHECK(*rep.average == Rational(n / 2));
    }
}

TEST_CASE("long random runs on symmetric three-value games average at most two") {
    // the welfare potential caps total deviations by (2n(n-1) + 4m)/2, so
    // with m >= 100 n^2 the empirical average settles at or below 2
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 2; ++trial) {
        int n = 4;
        int m = 100 * n * n;
        Game g = ashg::gen_random_game(n, GameClass::FENG, true, rng());
        Partition p0 = stable_start(g, Notion::NS);
        UpdateSequence seq = ashg::gen_update_sequence(g, p0, Notion::NS, m, rng());
        SequenceReport rep = ashg::run_sequence(seq, ashg::GreedyDynamicsPolicy{});
        REQUIRE(rep.completed);
        CHECK(!(*rep.average > Rational(2)));
    }
}

TEST_CASE("a too-small nearest budget aborts with a partial report") {
    auto [down, up] = ashg::build_fig5_updown(6);
    UpdateSequence seq{down.game, down.start, {down.update}, Notion::IS};
    SequenceReport rep = ashg::run_sequence(seq, ashg::NearestStablePolicy{2, ashg::kDefaultVisitedCap});
    CHECK_FALSE(rep.completed);
    CHECK(rep.per_step.empty());
    CHECK_FALSE(rep.failure.empty());
}

TEST_CASE("policy and notion mismatches are contract errors") {
    Game g = ashg::gen_random_game(5, GameClass::Strict, true, 23);
    Partition p = stable_start(g, Notion::NS);
    UpdateSequence seq{g, p, {}, Notion::NS};
    CHECK_THROWS_AS(ashg::run_sequence(seq, ashg::CloseCnsPolicy{}), ashg::contract_error);
    CHECK_THROWS_AS(ashg::run_sequence(seq, ashg::CisDynamicsPolicy{}), ashg::contract_error);
    Game asym = ashg::gen_random_game(5, GameClass::FENG, false, 29);
    auto stable = ashg::enumerate_all_stable(asym, Notion::NS);
    if (!stable.empty()) {
        UpdateSequence s2{asym, stable.front(), {}, Notion::NS};
        CHECK_THROWS_AS(ashg::run_sequence(s2, ashg::GreedyDynamicsPolicy{}), ashg::contract_error);
    }
}

TEST_CASE("non-symmetric contractual-individual runs audit at the weaker bounds") {
    std::mt19937_64 rng(31);
    int done = 0;
    for (int t = 0; t < 40 && done < 4; ++t) {
        int n = 6;
        Game g = ashg::gen_random_game(n, GameClass::FENG, false, rng());
        auto stable = ashg::enumerate_all_stable(g, Notion::CIS);
        if (stable.empty()) continue;
        ++done;
        UpdateSequence seq = ashg::gen_update_sequence(g, stable.front(), Notion::CIS, 80, rng());
        SequenceReport rep = ashg::run_sequence(seq, ashg::GreedyDynamicsPolicy{});
        REQUIRE(rep.completed);
        auto audit = ashg::potential_audit(rep, n, false);
        CHECK(audit.ok);
        for (const auto& st : rep.per_step) {
            CHECK(!(st.sw_after_update - st.sw_before_update < Rational(-2)));
            for (const auto& d : st.deviation_sw_deltas) CHECK(!(d < Rational(1)));
        }
    }
    CHECK(done == 4);
}

TEST_CASE("audits flag fabricated violations") {
    SequenceReport rep;
    ashg::SequenceStep st;
    st.sw_before_update = Rational(0);
    st.sw_after_update = Rational(-5);  // drop below the symmetric bound
    st.sw = Rational(0);
    rep.per_step.push_back(st);
    auto audit = ashg::potential_audit(rep, 4, true);
    CHECK_FALSE(audit.ok);
    REQUIRE_FALSE(audit.violations.empty());
}

TEST_CASE("dynamics traces serialize to one JSON object per line") {
    Game g = ashg::gen_random_game(6, GameClass::FENG, true, 47);
    auto trace = ashg::run_dynamics(g, Partition::singletons(6), Notion::NS, ashg::FirstInOrder{});
    REQUIRE(trace.converged);
    std::string jsonl = ashg::trace_to_jsonl(trace);
    CHECK(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) ==
          trace.steps.size());
    std::istringstream lines(jsonl);
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        ashg::Json j = ashg::Json::parse(line);
        CHECK(j.at("agent") == trace.steps[i].agent);
        CHECK(j.at("u_before") == trace.steps[i].u_before.str());
        CHECK(j.at("u_after") == trace.steps[i].u_after.str());
        CHECK((j.at("target").is_number_integer() || j.at("target") == "new"));
        ++i;
    }
    CHECK(i == trace.steps.size());
}

TEST_CASE("sequence reports serialize with an optional average and CSV rows") {
    Game g = ashg::gen_random_game(5, GameClass::FENG, true, 37);
    Partition p = stable_start(g, Notion::NS);
    UpdateSequence seq = ashg::gen_update_sequence(g, p, Notion::NS, 10, 41);
    SequenceReport rep = ashg::run_sequence(seq, ashg::GreedyDynamicsPolicy{});
    ashg::Json j = ashg::sequence_report_to_json(rep);
    CHECK(j.at("per_step").size() == 10);
    CHECK(j.at("total_distance").get<long long>() == rep.total_distance);
    std::string csv = ashg::sequence_report_to_csv(rep);
    CHECK(csv.rfind("step,distance,phi,sw\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}
