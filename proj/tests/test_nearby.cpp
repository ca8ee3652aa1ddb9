#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "ashg/distance.hpp"
#include "ashg/instances.hpp"
#include "ashg/nearby.hpp"
#include "oracles.hpp"

using ashg::AlteredInstance;
using ashg::Game;
using ashg::GameClass;
using ashg::Notion;
using ashg::Partition;
using ashg::Rational;

TEST_CASE("a zero budget yields exactly the start partition") {
    Partition p = Partition::of_coalitions(4, {{0, 1}, {2, 3}});
    auto got = ashg::enumerate_within(p, 0);
    REQUIRE(got.size() == 1);
    CHECK(got[0].first == p);
    CHECK(got[0].second == 0);
}

TEST_CASE("one move from {{0,1},{2}} reaches exactly the single-move set") {
    Partition p = Partition::of_coalitions(3, {{0, 1}, {2}});
    auto got = ashg::enumerate_within(p, 1);
    std::set<std::string> keys;
    for (auto& [q, d] : got) keys.insert(q.key());
    std::set<std::string> expect{p.key()};
    for (const Partition& q : oracle::neighbors(p)) expect.insert(q.key());
    CHECK(keys == expect);
    for (auto& [q, d] : got) CHECK(d == (q == p ? 0 : 1));
}

TEST_CASE("two moves from all-singletons over three agents reach every partition") {
    auto got = ashg::enumerate_within(Partition::singletons(3), 2);
    CHECK(got.size() == 5);  // Bell(3)
    for (auto& [q, d] : got) CHECK(ashg::partition_distance(Partition::singletons(3), q) <= 2);
}

TEST_CASE("the stream is deduplicated, depth-exact and level-ordered") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        int n = 3 + static_cast<int>(rng() % 4);
        std::vector<int> lab(static_cast<std::size_t>(n));
        for (auto& v : lab) v = static_cast<int>(rng() % n);
        Partition p = Partition::of_assignment(lab);
        int k = 1 + static_cast<int>(rng() % 3);
        std::set<std::string> seen;
        int last_depth = 0;
        std::string prev_key;
        std::size_t count = ashg::for_each_within(p, k, ashg::kDefaultVisitedCap,
                                                  [&](const Partition& q, int d) {
            CHECK(seen.insert(q.key()).second);           // exactly once
            CHECK(d >= last_depth);                        // nondecreasing depth
            if (d == last_depth && d > 0 && !prev_key.empty()) CHECK(prev_key < q.key());
            prev_key = d == last_depth ? q.key() : std::string();
            last_depth = d;
            CHECK(d == ashg::partition_distance(p, q));    // BFS depth is the metric
            return true;
        });
        CHECK(count == seen.size());
        // yield bound: sum of n^(2j) over depths
        double bound = 0;
        for (int j = 0; j <= k; ++j) bound += std::pow(static_cast<double>(n), 2 * j);
        CHECK(static_cast<double>(count) <= bound);
    }
}

TEST_CASE("the visited-set cap trips as a resource error") {
    CHECK_THROWS_AS(ashg::enumerate_within(Partition::singletons(6), 3, 10), ashg::resource_error);
}

namespace {

AlteredInstance fig3_instance(int k) {
    ashg::GadgetBundle b = ashg::build_fig3_tight();
    return b.as_instance(k);
}

}  // namespace

TEST_CASE("an update that keeps the start stable is found at distance zero") {
    ashg::GadgetBundle b = ashg::build_fig3_tight();
    AlteredInstance inst{b.game, b.start, ashg::UpdateEvent{}, Notion::CNS, 2};
    auto out = ashg::nearest_stable(inst);
    REQUIRE(out.found);
    CHECK(out.distance == 0);
    CHECK(*out.partition == b.start);
}

TEST_CASE("the tight instance needs distance four") {
    auto miss = ashg::nearest_stable(fig3_instance(3));
    CHECK_FALSE(miss.found);
    CHECK(miss.explored > 0);

    auto hit = ashg::nearest_stable(fig3_instance(4));
    REQUIRE(hit.found);
    CHECK(hit.distance == 4);
    Game altered = fig3_instance(4).game.with_update(fig3_instance(4).update);
    CHECK(ashg::is_stable(altered, *hit.partition, Notion::CNS));

    SECTION("parallel scanning returns the identical outcome") {
        auto hit2 = ashg::nearest_stable(fig3_instance(4), ashg::kDefaultVisitedCap, 2);
        REQUIRE(hit2.found);
        CHECK(hit2.distance == 4);
        CHECK(*hit2.partition == *hit.partition);
        CHECK(hit2.explored == hit.explored);
        auto miss2 = ashg::nearest_stable(fig3_instance(3), ashg::kDefaultVisitedCap, 2);
        CHECK_FALSE(miss2.found);
        CHECK(miss2.explored == miss.explored);
    }
}

TEST_CASE("the directed cycle leaves no contractual repair within n-4") {
    ashg::GadgetBundle b = ashg::build_fig4_cycle(6);
    CHECK(ashg::is_stable(b.game, b.start, Notion::CIS));
    auto out = ashg::nearest_stable(b.as_instance(2));
    CHECK_FALSE(out.found);
    auto hit = ashg::nearest_stable(b.as_instance(3));
    REQUIRE(hit.found);
    CHECK(hit.distance == 3);
}

TEST_CASE("instances whose start promise fails are rejected") {
    ashg::GadgetBundle b = ashg::build_fig3_tight();
    AlteredInstance inst{b.game, b.start, b.update, Notion::NS, 2};  // start is not NS-stable
    CHECK_THROWS_AS(ashg::nearest_stable(inst), ashg::contract_error);
}

TEST_CASE("enumerate_all_stable matches a brute-force filter") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        Game g = ashg::gen_random_game(n, GameClass::FENG, rng() % 2 == 0, rng());
        for (Notion x : {Notion::NS, Notion::IS, Notion::CNS, Notion::CIS}) {
            auto got = ashg::enumerate_all_stable(g, x);
            std::vector<Partition> expect;
            for (const Partition& p : oracle::all_partitions(n))
                if (oracle::brute_stable(g, p, x)) expect.push_back(p);
            REQUIRE(got.size() == expect.size());
            std::set<std::string> a, b;
            for (auto& p : got) a.insert(p.key());
            for (auto& p : expect) b.insert(p.key());
            CHECK(a == b);
        }
    }
    CHECK_THROWS_AS(ashg::enumerate_all_stable(ashg::gen_random_game(11, GameClass::FEG, true, 1),
                                               Notion::NS),
                    ashg::resource_error);
}

TEST_CASE("every random symmetric strict game admits a Nash stable partition") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        int n = 2 + static_cast<int>(rng() % 6);
        Game g = ashg::gen_random_game(n, GameClass::Strict, true, rng());
        CHECK_FALSE(ashg::enumerate_all_stable(g, Notion::NS).empty());
    }
}

TEST_CASE("all-positive games keep the grand coalition among the stable set") {
    Game g = ashg::gen_random_game(5, GameClass::General, true, 13, {Rational(1), Rational(2)});
    auto stable = ashg::enumerate_all_stable(g, Notion::NS);
    bool has_grand = false;
    for (const auto& p : stable)
        if (p == Partition::grand(5)) has_grand = true;
    CHECK(has_grand);
}

TEST_CASE("nearest search agrees with exhaustive filtering on random instances") {
    std::mt19937_64 rng(17);
    int done = 0;
    for (int t = 0; t < 200 && done < 40; ++t) {
        int n = 3 + static_cast<int>(rng() % 5);  // up to seven agents
        Game g = ashg::gen_random_game(n, GameClass::FENG, true, rng());
        Notion x = static_cast<Notion>(rng() % 4);
        auto stable = ashg::enumerate_all_stable(g, x);
        if (stable.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, stable.size() - 1);
        Partition start = stable[pick(rng)];
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        Rational nv = g.value(i, j) == Rational(1) ? Rational(-1) : Rational(1);
        ashg::UpdateEvent u{{i}, {j}, {{i, j, nv}}};
        int k = static_cast<int>(rng() % 4);
        auto out = ashg::nearest_stable(AlteredInstance{g, start, u, x, k});
        Game altered = g.with_update(u);
        // oracle side: filter all stable partitions of the altered game by distance
        int best = -1;
        for (const Partition& q : oracle::all_partitions(n)) {
            if (!oracle::brute_stable(altered, q, x)) continue;
            int d = ashg::partition_distance(start, q);
            if (best == -1 || d < best) best = d;
        }
        bool expect_found = best != -1 && best <= k;
        CHECK(out.found == expect_found);
        if (expect_found) {
            CHECK(out.distance == best);
            CHECK(ashg::is_stable(altered, *out.partition, x));
            // ties among equally-near stable partitions break canonically
            std::string least;
            for (const Partition& q : oracle::all_partitions(n)) {
                if (!oracle::brute_stable(altered, q, x)) continue;
                if (ashg::partition_distance(start, q) != best) continue;
                if (least.empty() || q.key() < least) least = q.key();
            }
            CHECK(out.partition->key() == least);
            if (best > 0) {
                bool any_closer = false;
                ashg::for_each_within(start, best - 1, ashg::kDefaultVisitedCap,
                                      [&](const Partition& q, int) {
                    if (ashg::is_stable(altered, q, x)) any_closer = true;
                    return !any_closer;
                });
                CHECK_FALSE(any_closer);
            }
        }
        ++done;
    }
    CHECK(done == 40);
}
