#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
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

// ---------------------------------------------------------------------------
// Cover problems (reduction sources)

enum class CoverVariant { SetCover, X3C, RX3C };

inline std::string cover_variant_name(CoverVariant v) {
    switch (v) {
        case CoverVariant::SetCover: return "setcover";
        case CoverVariant::X3C: return "x3c";
        case CoverVariant::RX3C: return "rx3c";
    }
    return "setcover";
}

inline CoverVariant cover_variant_from_name(const std::string& s) {
    if (s == "setcover") return CoverVariant::SetCover;
    if (s == "x3c") return CoverVariant::X3C;
    if (s == "rx3c") return CoverVariant::RX3C;
    throw input_error("unknown cover variant '" + s + "'");
}

/// A Set Cover / X3C / RX3C instance over elements 0..universe-1.
struct CoverInstance {
    CoverVariant variant = CoverVariant::SetCover;
    int universe = 0;
    std::vector<std::vector<int>> sets;
    int k = 0;  // cover-size target; ignored by the exact-cover variants

    void validate() const {
        if (universe < 1) throw input_error("cover instance needs a nonempty universe");
        std::vector<int> deg(static_cast<std::size_t>(universe), 0);
        for (const auto& s : sets) {
            if (s.empty()) throw input_error("cover instance contains an empty set");
            std::set<int> distinct(s.begin(), s.end());
            if (distinct.size() != s.size()) throw input_error("cover set with repeated elements");
            for (int e : s) {
                if (e < 0 || e >= universe) throw input_error("cover set element out of range");
                ++deg[static_cast<std::size_t>(e)];
            }
            if (variant != CoverVariant::SetCover && s.size() != 3)
                throw input_error("exact-cover variant requires 3-element sets");
        }
        if (variant == CoverVariant::RX3C) {
            if (static_cast<int>(sets.size()) != universe)
                throw input_error("regular exact cover requires |E| = |F|");
            for (int d : deg)
                if (d != 3) throw input_error("regular exact cover requires every element in exactly 3 sets");
        }
        for (int d : deg)
            if (d == 0) throw input_error("the set family does not cover the universe");
    }

    bool covered_by(const std::vector<int>& chosen) const {
        std::vector<char> hit(static_cast<std::size_t>(universe), 0);
        for (int s : chosen) {
            if (s < 0 || s >= static_cast<int>(sets.size()))
                throw input_error("cover set index out of range");
            for (int e : sets[static_cast<std::size_t>(s)]) hit[static_cast<std::size_t>(e)] = 1;
        }
        return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    }

    bool exactly_covered_by(const std::vector<int>& chosen) const {
        std::vector<int> cnt(static_cast<std::size_t>(universe), 0);
        for (int s : chosen)
            for (int e : sets[static_cast<std::size_t>(s)]) ++cnt[static_cast<std::size_t>(e)];
        return std::all_of(cnt.begin(), cnt.end(), [](int c) { return c == 1; });
    }
};

/// Micro brute-force cover oracle (families up to 24 sets).
inline std::optional<int> brute_min_cover(const CoverInstance& inst) {
    if (inst.sets.size() > 24) throw resource_error("cover family too large for the brute-force oracle", 0);
    int m = static_cast<int>(inst.sets.size());
    std::optional<int> best;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> chosen;
        for (int s = 0; s < m; ++s)
            if (mask & (1u << s)) chosen.push_back(s);
        if (inst.covered_by(chosen)) {
            int sz = static_cast<int>(chosen.size());
            if (!best || sz < *best) best = sz;
        }
    }
    return best;
}

inline std::optional<std::vector<int>> brute_exact_cover(const CoverInstance& inst) {
    if (inst.sets.size() > 24) throw resource_error("cover family too large for the brute-force oracle", 0);
    int m = static_cast<int>(inst.sets.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> chosen;
        for (int s = 0; s < m; ++s)
            if (mask & (1u << s)) chosen.push_back(s);
        if (!chosen.empty() && inst.exactly_covered_by(chosen)) return chosen;
    }
    return std::nullopt;
}

/// A regular exact-cover family on 3k elements (k row triples forming an
/// exact cover plus two shifted triple families); every element lies in
/// exactly three sets. Used as a deterministic desk-scale input family.
inline CoverInstance rx3c_grid_instance(int k) {
    if (k < 5) throw input_error("grid family needs k >= 5 for distinct sets");
    CoverInstance inst;
    inst.variant = CoverVariant::RX3C;
    inst.universe = 3 * k;
    auto e = [&](int row, int col) { return 3 * ((row % k + k) % k) + col; };
    for (int r = 0; r < k; ++r) inst.sets.push_back({e(r, 0), e(r, 1), e(r, 2)});
    for (int r = 0; r < k; ++r) inst.sets.push_back({e(r, 0), e(r + 1, 1), e(r + 2, 2)});
    for (int r = 0; r < k; ++r) inst.sets.push_back({e(r, 0), e(r + 2, 1), e(r + 4, 2)});
    inst.k = k;
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Reduction parameters

/// Positive rational parameter of the agent count: const(c) or linear(n)*c.
struct ParamFn {
    enum class Kind { Const, Linear };
    Kind kind = Kind::Const;
    Rational c = Rational(1);

    Rational eval(int n) const { return kind == Kind::Const ? c : c * Rational(n); }

    static ParamFn constant(Rational v) { return {Kind::Const, std::move(v)}; }
    static ParamFn linear(Rational scale = Rational(1)) { return {Kind::Linear, std::move(scale)}; }

    static ParamFn parse(const std::string& s) {
        if (s == "linear") return linear();
        if (s.rfind("linear:", 0) == 0) return linear(Rational::parse(s.substr(7)));
        return constant(Rational::parse(s));
    }
    std::string str() const {
        if (kind == Kind::Const) return c.str();
        return "linear:" + c.str();
    }
};

struct ReductionParams {
    ParamFn alpha = ParamFn::constant(Rational(1));
    ParamFn beta = ParamFn::constant(Rational(1));
};

// ---------------------------------------------------------------------------
// Gadget bundles

/// A generated instance: the game, a start partition stable for the notion,
/// the valuation update, and the mapped distance budget. `layout` names the
/// agent blocks so tests and witness checks can address agents by role.
struct GadgetBundle {
    Game game;
    Partition start;
    UpdateEvent update;
    Notion notion = Notion::NS;
    int budget = 0;
    std::string provenance;
    std::map<std::string, std::vector<int>> layout;
    std::optional<CoverInstance> source;

    const std::vector<int>& block(const std::string& name) const {
        auto it = layout.find(name);
        if (it == layout.end()) throw input_error("bundle has no block named '" + name + "'");
        return it->second;
    }
    int agent(const std::string& name) const {
        const auto& b = block(name);
        if (b.size() != 1) throw input_error("block '" + name + "' is not a single agent");
        return b.front();
    }

    AlteredInstance as_instance() const { return {game, start, update, notion, budget}; }
    AlteredInstance as_instance(int k) const { return {game, start, update, notion, k}; }
};

namespace detail {

/// Assembles block-structured games: named agent blocks, a default value,
/// block-pair rules and per-pair exceptions.
class GadgetLayout {
public:
    int add_block(const std::string& name, int size) {
        if (size < 0) throw input_error("negative block size");
        names_.push_back(name);
        sizes_.push_back(size);
        offsets_.push_back(n_);
        n_ += size;
        return static_cast<int>(names_.size()) - 1;
    }
    int add_agent(const std::string& name) { return add_block(name, 1); }

    int n() const { return n_; }
    int blocks() const { return static_cast<int>(names_.size()); }
    int offset(int b) const { return offsets_[static_cast<std::size_t>(b)]; }
    int size(int b) const { return sizes_[static_cast<std::size_t>(b)]; }
    int agent(int b, int i = 0) const { return offsets_[static_cast<std::size_t>(b)] + i; }

    void fill_default(const Rational& v) { def_ = v; }
    /// Sets the block-pair value in both directions.
    void set(int a, int b, const Rational& v) {
        rule(a, b) = v;
        rule(b, a) = v;
    }
    /// Directional block-pair value (non-symmetric games).
    void set_dir(int a, int b, const Rational& v) { rule(a, b) = v; }
    void add_exception(int i, int j, const Rational& v) { exceptions_.emplace_back(i, j, v); }
    void add_exception_sym(int i, int j, const Rational& v) {
        exceptions_.emplace_back(i, j, v);
        exceptions_.emplace_back(j, i, v);
    }

    Game build(bool symmetric, GameClass cls) {
        Game::BlockSpec spec;
        spec.block_of.resize(static_cast<std::size_t>(n_));
        for (int b = 0; b < blocks(); ++b)
            for (int i = 0; i < size(b); ++i)
                spec.block_of[static_cast<std::size_t>(agent(b, i))] = b;
        spec.values.assign(static_cast<std::size_t>(blocks()) * static_cast<std::size_t>(blocks()), def_);
        for (const auto& [a, b, v] : rules_)
            spec.values[static_cast<std::size_t>(a) * static_cast<std::size_t>(blocks()) +
                        static_cast<std::size_t>(b)] = v;
        spec.exceptions = exceptions_;
        return Game::blocky(n_, symmetric, cls, std::move(spec));
    }

    std::map<std::string, std::vector<int>> layout_map() const {
        std::map<std::string, std::vector<int>> m;
        for (int b = 0; b < blocks(); ++b) {
            auto& v = m[names_[static_cast<std::size_t>(b)]];
            for (int i = 0; i < size(b); ++i) v.push_back(agent(b, i));
        }
        return m;
    }

    std::vector<int> block_agents(int b) const {
        std::vector<int> v;
        for (int i = 0; i < size(b); ++i) v.push_back(agent(b, i));
        return v;
    }

private:
    Rational& rule(int a, int b) {
        for (auto& [x, y, v] : rules_)
            if (x == a && y == b) return v;
        rules_.emplace_back(a, b, Rational(0));
        return std::get<2>(rules_.back());
    }

    int n_ = 0;
    std::vector<std::string> names_;
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    Rational def_ = Rational(0);
    std::vector<std::tuple<int, int, Rational>> rules_;
    std::vector<std::tuple<int, int, Rational>> exceptions_;
};

inline void assert_start_stable(const GadgetBundle& b) {
    if (!is_stable(b.game, b.start, b.notion))
        throw contract_error("construction bug: start partition of '" + b.provenance +
                             "' is not " + notion_name(b.notion) + "-stable");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Random restricted-class games

/// Deterministic-in-seed random game with valuations drawn from the palette.
inline Game gen_random_game(int n, GameClass cls, bool symmetric, std::uint64_t seed,
                            std::vector<Rational> palette = {}) {
    if (n < 1) throw input_error("game needs at least one agent");
    if (palette.empty()) palette = default_palette(cls, n);
    std::vector<Rational> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(0));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = symmetric ? i + 1 : 0; j < n; ++j) {
            if (i == j) continue;
            const Rational& v = palette[pick(rng)];
            table[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = v;
            if (symmetric)
                table[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = v;
        }
    }
    try {
        return Game::dense(n, symmetric, cls, std::move(table));
    } catch (const class_violation_error& e) {
        throw input_error(std::string("palette incompatible with class: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// The three named instances

/// Eight-agent symmetric friends/enemies game whose repaired partition sits
/// at distance exactly 4 after one pair flips negative.
inline GadgetBundle build_fig3_tight() {
    int n = 8;
    std::vector<Rational> t(64, Rational(-1));
    auto set = [&](int i, int j, int v) {
        t[static_cast<std::size_t>(i) * 8 + static_cast<std::size_t>(j)] = Rational(v);
        t[static_cast<std::size_t>(j) * 8 + static_cast<std::size_t>(i)] = Rational(v);
    };
    set(6, 7, 1);
    for (int i : {0, 4, 5})
        for (int j : {1, 2, 3}) set(i, j, 1);
    GadgetBundle b;
    b.game = Game::dense(n, true, GameClass::FEG, std::move(t));
    b.start = Partition::of_coalitions(n, {{0, 1, 2, 3, 6, 7}, {4}, {5}});
    b.update = UpdateEvent{{6}, {7}, {{6, 7, Rational(-1)}}};
    b.notion = Notion::CNS;
    b.budget = 4;
    b.provenance = "fig3";
    for (int i = 0; i < n; ++i) b.layout["agents"].push_back(i);
    detail::assert_start_stable(b);
    return b;
}

/// Directed single-cycle friends game: the grand coalition is contractually
/// stable until the closing edge flips, after which every stable partition
/// is at least n-3 moves away and has coalitions of size at most 3.
inline GadgetBundle build_fig4_cycle(int n, Notion notion = Notion::CIS) {
    if (n < 4) throw input_error("cycle instance needs n >= 4");
    if (notion != Notion::CIS && notion != Notion::CNS)
        throw input_error("cycle instance targets cns or cis");
    std::vector<Rational> t(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(-1));
    for (int i = 0; i < n; ++i)
        t[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>((i + 1) % n)] = Rational(1);
    GadgetBundle b;
    b.game = Game::dense(n, false, GameClass::FEG, std::move(t));
    b.start = Partition::grand(n);
    b.update = UpdateEvent{{n - 1}, {0}, {{n - 1, 0, Rational(-1)}}};
    b.notion = notion;
    b.budget = n - 3;
    b.provenance = "fig4";
    for (int i = 0; i < n; ++i) b.layout["agents"].push_back(i);
    detail::assert_start_stable(b);
    return b;
}

/// Two-hub clique gadget with a +-n^2 valuation between the hubs; flipping
/// it swaps the unique stable partition between the two-coalition split and
/// the grand coalition, forcing distance n/2 per flip. Returns the downward
/// game (split start) and the upward game (grand start).
inline std::pair<GadgetBundle, GadgetBundle> build_fig5_updown(int n, Notion notion = Notion::IS) {
    if (n < 6) throw input_error("hub gadget needs n >= 6");
    if (notion != Notion::NS && notion != Notion::IS)
        throw input_error("hub gadget targets ns or is");
    bool odd = n % 2 != 0;
    int ell = (odd ? n - 3 : n - 2) / 2;
    detail::GadgetLayout L;
    int X = L.add_block("X", ell);
    int Y = L.add_block("Y", ell);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int lone = odd ? L.add_agent("loner") : -1;
    L.fill_default(Rational(-1));  // only used by the odd extra agent
    Rational nn(n);
    Rational n2 = nn * nn;
    L.set(X, X, Rational(1));
    L.set(Y, Y, Rational(1));
    L.set(X, Y, Rational(1));
    L.set(z1, X, nn);
    L.set(z2, Y, nn);
    L.set(z1, Y, Rational(1));
    L.set(z2, X, Rational(1));
    L.set(z1, z2, -n2);
    if (odd) {
        L.set(lone, X, Rational(-1));
        L.set(lone, Y, Rational(-1));
        L.set(lone, z1, Rational(-1));
        L.set(lone, z2, Rational(-1));
    }
    Game down = L.build(true, GameClass::Strict);
    int a1 = L.agent(z1), a2 = L.agent(z2);

    std::vector<std::vector<int>> split;
    {
        std::vector<int> c1 = L.block_agents(X), c2 = L.block_agents(Y);
        c1.push_back(a1);
        c2.push_back(a2);
        split = {c1, c2};
        if (odd) split.push_back({L.agent(lone)});
    }
    std::vector<std::vector<int>> grand;
    {
        std::vector<int> all;
        for (int i = 0; i < (odd ? n - 1 : n); ++i) all.push_back(i);
        grand = {all};
        if (odd) grand.push_back({L.agent(lone)});
    }

    GadgetBundle downb;
    downb.game = down;
    downb.start = Partition::of_coalitions(n, split);
    downb.update = UpdateEvent{{a1}, {a2}, {{a1, a2, n2}}};
    downb.notion = notion;
    downb.budget = n / 2;
    downb.provenance = "fig5-down";
    downb.layout = L.layout_map();

    GadgetBundle upb;
    upb.game = down.with_update(downb.update);
    upb.start = Partition::of_coalitions(n, grand);
    upb.update = UpdateEvent{{a1}, {a2}, {{a1, a2, -n2}}};
    upb.notion = notion;
    upb.budget = n / 2;
    upb.provenance = "fig5-up";
    upb.layout = L.layout_map();

    detail::assert_start_stable(downb);
    detail::assert_start_stable(upb);
    return {std::move(downb), std::move(upb)};
}

// ---------------------------------------------------------------------------
// Cover reductions

namespace detail {

inline void require(bool cond, const std::string& condition) {
    if (!cond) throw input_error("side condition violated: " + condition);
}

/// Common skeleton: named blocks E (element agents) and S (set agents).
struct CoverBlocks {
    GadgetLayout L;
    int E, S;
};

inline CoverBlocks cover_blocks(const CoverInstance& inst) {
    CoverBlocks cb;
    cb.E = cb.L.add_block("E", inst.universe);
    cb.S = cb.L.add_block("S", static_cast<int>(inst.sets.size()));
    return cb;
}

}  // namespace detail

/// Zero-valuation reduction: elements, sets, a large buffer clique around
/// two linked hubs; breaking the hub link forces a cover-sized repair.
/// Budget k+1. Valid for all four notions (NS/CNS require alpha <= beta).
inline GadgetBundle compile_setcover_thm43(const CoverInstance& inst, const ReductionParams& params,
                                           Notion notion) {
    inst.validate();
    int ne = inst.universe, ns = static_cast<int>(inst.sets.size());
    detail::require(inst.variant == CoverVariant::SetCover, "variant must be setcover");
    detail::require(inst.k >= 0, "k >= 0");
    detail::require(inst.k < ne, "k < |E|");
    detail::require(inst.k < ns, "k < |S|");
    auto cb = detail::cover_blocks(inst);
    auto& L = cb.L;
    int Y = L.add_block("Y", ne + ns + 3);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int n = L.n();
    Rational alpha = params.alpha.eval(n), beta = params.beta.eval(n);
    detail::require(alpha.sign() > 0, "alpha > 0");
    detail::require(beta.sign() > 0, "beta > 0");
    if (notion == Notion::NS || notion == Notion::CNS)
        detail::require(!(alpha > beta), "alpha <= beta for ns/cns");
    L.fill_default(Rational(0));
    for (int s = 0; s < ns; ++s)
        for (int e : inst.sets[static_cast<std::size_t>(s)])
            L.add_exception_sym(L.agent(cb.E, e), L.agent(cb.S, s), -beta);
    L.set(z1, cb.E, alpha);
    L.set(z2, cb.E, -beta);
    L.set(z2, cb.S, -beta);
    L.set(z1, Y, alpha);
    L.set(z1, z2, alpha);

    GadgetBundle b;
    b.game = L.build(true, GameClass::General);
    std::vector<std::vector<int>> coals;
    for (int e = 0; e < ne; ++e) coals.push_back({L.agent(cb.E, e)});
    for (int s = 0; s < ns; ++s) coals.push_back({L.agent(cb.S, s)});
    std::vector<int> hub = L.block_agents(Y);
    hub.push_back(L.agent(z1));
    hub.push_back(L.agent(z2));
    coals.push_back(hub);
    b.start = Partition::of_coalitions(n, coals);
    b.update = UpdateEvent{{L.agent(z1)}, {L.agent(z2)}, {{L.agent(z1), L.agent(z2), -beta}}};
    b.notion = notion;
    b.budget = inst.k + 1;
    b.provenance = "thm43";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Strict two-value reduction where one agent sours on every element agent
/// at once (a 1-to-N update). Budget k+1, contractual notions.
inline GadgetBundle compile_setcover_thm51(const CoverInstance& inst, const ReductionParams& params,
                                           Notion notion) {
    inst.validate();
    int ne = inst.universe, ns = static_cast<int>(inst.sets.size());
    detail::require(inst.variant == CoverVariant::SetCover, "variant must be setcover");
    detail::require(notion == Notion::CNS || notion == Notion::CIS, "notion must be cns or cis");
    detail::require(inst.k > 1, "k > 1");
    detail::require(inst.k < ne - 1, "k < |E| - 1");
    detail::require(inst.k < ns - 1, "k < |S| - 1");
    auto cb = detail::cover_blocks(inst);
    auto& L = cb.L;
    int z = L.add_agent("z");
    int n = L.n();
    Rational alpha = params.alpha.eval(n), beta = params.beta.eval(n);
    detail::require(alpha.sign() > 0, "alpha > 0");
    detail::require(beta.sign() > 0, "beta > 0");
    L.fill_default(-beta);
    for (int s = 0; s < ns; ++s)
        for (int e : inst.sets[static_cast<std::size_t>(s)])
            L.add_exception_sym(L.agent(cb.E, e), L.agent(cb.S, s), alpha);
    L.set(cb.E, z, alpha);
    L.set(cb.S, cb.S, alpha);

    GadgetBundle b;
    b.game = L.build(true, GameClass::Strict);
    std::vector<int> ez = L.block_agents(cb.E);
    ez.push_back(L.agent(z));
    b.start = Partition::of_coalitions(n, {ez, L.block_agents(cb.S)});
    UpdateEvent u;
    u.D = {L.agent(z)};
    u.E = L.block_agents(cb.E);
    for (int e = 0; e < ne; ++e) u.entries.emplace_back(L.agent(z), L.agent(cb.E, e), -beta);
    b.update = std::move(u);
    b.notion = notion;
    b.budget = inst.k + 1;
    b.provenance = "thm51";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Strict three-value reduction ({-2M, -1, 1}) for the contractual-Nash
/// single-pair problem. Budget k+2.
inline GadgetBundle compile_setcover_thm52(const CoverInstance& inst, Notion notion) {
    inst.validate();
    int ne = inst.universe, ns = static_cast<int>(inst.sets.size());
    detail::require(inst.variant == CoverVariant::SetCover, "variant must be setcover");
    detail::require(notion == Notion::CNS, "notion must be cns");
    detail::require(inst.k > 2, "k > 2");
    detail::require(inst.k < ne - 1, "k < |E| - 1");
    detail::require(inst.k < ns - 1, "k < |S| - 1");
    int M = ne + ns;
    auto cb = detail::cover_blocks(inst);
    auto& L = cb.L;
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int Y = L.add_block("Y", M);
    Rational big(-2 * static_cast<std::int64_t>(M));
    L.fill_default(Rational(-1));
    for (int s = 0; s < ns; ++s)
        for (int e : inst.sets[static_cast<std::size_t>(s)])
            L.add_exception_sym(L.agent(cb.E, e), L.agent(cb.S, s), big);
    L.set(cb.S, cb.S, Rational(1));
    L.set(Y, cb.E, Rational(1));
    L.set(Y, Y, Rational(1));
    L.set(z1, cb.E, big);
    L.set(z1, z2, Rational(1));

    GadgetBundle b;
    b.game = L.build(true, GameClass::Strict);
    std::vector<std::vector<int>> coals;
    for (int e = 0; e < ne; ++e) coals.push_back({L.agent(cb.E, e)});
    coals.push_back(L.block_agents(cb.S));
    std::vector<int> hub = L.block_agents(Y);
    hub.push_back(L.agent(z1));
    hub.push_back(L.agent(z2));
    coals.push_back(hub);
    b.start = Partition::of_coalitions(L.n(), coals);
    b.update = UpdateEvent{{L.agent(z1)}, {L.agent(z2)}, {{L.agent(z1), L.agent(z2), Rational(-1)}}};
    b.notion = notion;
    b.budget = inst.k + 2;
    b.provenance = "thm52";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Individual-stability reduction: a raised hub valuation lets one guard
/// agent defect to the buffer clique, and only a cover-sized escort into
/// the vacated clique restores stability. Requires alpha >= beta.
/// Budget k+1.
inline GadgetBundle compile_setcover_thm58(const CoverInstance& inst, const ReductionParams& params,
                                           Notion notion) {
    inst.validate();
    int ne = inst.universe, ns = static_cast<int>(inst.sets.size());
    detail::require(inst.variant == CoverVariant::SetCover, "variant must be setcover");
    detail::require(notion == Notion::IS, "notion must be is");
    detail::require(inst.k > 1, "k > 1");
    detail::require(inst.k < ne - 1, "k < |E| - 1");
    detail::require(inst.k < ns - 1, "k < |S| - 1");
    int M = 4 * (ne + ns);
    auto cb = detail::cover_blocks(inst);
    auto& L = cb.L;
    int X1 = L.add_block("X1", 3 * M * M / 4);
    int X2 = L.add_block("X2", M * M / 4);
    int Y = L.add_block("Y", M * M * M);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int n = L.n();
    Rational alpha = params.alpha.eval(n), beta = params.beta.eval(n);
    detail::require(alpha.sign() > 0, "alpha > 0");
    detail::require(beta.sign() > 0, "beta > 0");
    detail::require(!(beta > alpha), "alpha >= beta");
    L.fill_default(-beta);
    L.set(cb.E, cb.S, alpha);  // overridden below for e in S
    for (int s = 0; s < ns; ++s)
        for (int e : inst.sets[static_cast<std::size_t>(s)])
            L.add_exception_sym(L.agent(cb.E, e), L.agent(cb.S, s), -beta);
    L.set(cb.E, cb.E, alpha);
    L.set(cb.E, X1, alpha);
    L.set(cb.E, X2, alpha);
    L.set(X1, X1, alpha);
    L.set(X2, X2, alpha);
    L.set(X1, X2, alpha);
    L.set(cb.S, X1, alpha);
    L.set(z1, X1, alpha);
    L.set(z1, X2, alpha);
    L.set(z1, Y, alpha);
    L.set(z2, Y, alpha);
    L.set(Y, Y, alpha);

    GadgetBundle b;
    b.game = L.build(true, GameClass::Strict);
    std::vector<std::vector<int>> coals;
    coals.push_back(L.block_agents(cb.E));
    for (int s = 0; s < ns; ++s) coals.push_back({L.agent(cb.S, s)});
    std::vector<int> xs{L.agent(z1)};
    for (int a : L.block_agents(X1)) xs.push_back(a);
    for (int a : L.block_agents(X2)) xs.push_back(a);
    coals.push_back(std::move(xs));
    std::vector<int> ys{L.agent(z2)};
    for (int a : L.block_agents(Y)) ys.push_back(a);
    coals.push_back(std::move(ys));
    b.start = Partition::of_coalitions(n, coals);
    b.update = UpdateEvent{{L.agent(z1)}, {L.agent(z2)}, {{L.agent(z1), L.agent(z2), alpha}}};
    b.notion = notion;
    b.budget = inst.k + 1;
    b.provenance = "thm58";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Non-symmetric contractual-Nash reduction with a three-hub rotation.
/// Budget k+3.
inline GadgetBundle compile_setcover_thm57(const CoverInstance& inst, const ReductionParams& params,
                                           Notion notion) {
    inst.validate();
    int ne = inst.universe, ns = static_cast<int>(inst.sets.size());
    detail::require(inst.variant == CoverVariant::SetCover, "variant must be setcover");
    detail::require(notion == Notion::CNS, "notion must be cns for the non-symmetric set-cover form");
    detail::require(inst.k > 2, "k > 2");
    detail::require(inst.k < ne - 1, "k < |E| - 1");
    detail::require(inst.k < ns - 1, "k < |S| - 1");
    auto cb = detail::cover_blocks(inst);
    auto& L = cb.L;
    int Y = L.add_block("Y", 4 * (ne + ns) + 7);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int z3 = L.add_agent("z3");
    int n = L.n();
    Rational alpha = params.alpha.eval(n), beta = params.beta.eval(n);
    detail::require(alpha.sign() > 0, "alpha > 0");
    detail::require(beta.sign() > 0, "beta > 0");
    L.fill_default(-beta);
    L.set(cb.S, cb.S, alpha);
    for (int s = 0; s < ns; ++s)
        for (int e : inst.sets[static_cast<std::size_t>(s)]) {
            L.add_exception(L.agent(cb.E, e), L.agent(cb.S, s), alpha);
            L.add_exception(L.agent(cb.S, s), L.agent(cb.E, e), alpha);
        }
    L.set_dir(z1, cb.E, alpha);
    L.set_dir(z1, Y, alpha);
    L.set_dir(z2, Y, alpha);
    L.set_dir(z3, Y, alpha);
    L.set_dir(z1, z2, alpha);
    L.set_dir(z2, z3, alpha);
    L.set_dir(z3, z2, alpha);
    L.set_dir(z3, z1, alpha);
    L.set(Y, Y, alpha);

    GadgetBundle b;
    b.game = L.build(false, GameClass::Strict);
    std::vector<int> front = L.block_agents(cb.E);
    front.push_back(L.agent(z1));
    front.push_back(L.agent(z2));
    front.push_back(L.agent(z3));
    b.start = Partition::of_coalitions(n, {front, L.block_agents(cb.S), L.block_agents(Y)});
    b.update = UpdateEvent{{L.agent(z2)}, {L.agent(z3)}, {{L.agent(z2), L.agent(z3), -beta}}};
    b.notion = notion;
    b.budget = inst.k + 3;
    b.provenance = "thm57";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Non-symmetric contractual-individual reduction from exact cover, with
/// per-element buffer cliques and pairwise blocker agents.
/// Budget |E|/3 + 3.
inline GadgetBundle compile_x3c_thm57(const CoverInstance& inst, const ReductionParams& params,
                                      Notion notion) {
    inst.validate();
    detail::require(inst.variant == CoverVariant::X3C, "variant must be x3c");
    detail::require(notion == Notion::CIS, "notion must be cis for the exact-cover form");
    int m = inst.universe, nf = static_cast<int>(inst.sets.size());
    detail::require(m > 6, "|E| > 6");
    detail::require(m % 3 == 0, "|E| divisible by 3");
    int M = m + nf;
    detail::GadgetLayout L;
    int E = L.add_block("E", m);
    int F = L.add_block("F", nf);
    std::vector<int> Yb(static_cast<std::size_t>(m)), Bb(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) Yb[static_cast<std::size_t>(i)] = L.add_block("Y" + std::to_string(i), M * M);
    for (int i = 0; i < m; ++i) Bb[static_cast<std::size_t>(i)] = L.add_block("B" + std::to_string(i), m - 1);
    int W = L.add_block("W", M * M * M);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int z3 = L.add_agent("z3");
    int n = L.n();
    Rational alpha = params.alpha.eval(n), beta = params.beta.eval(n);
    detail::require(alpha.sign() > 0, "alpha > 0");
    detail::require(beta.sign() > 0, "beta > 0");
    L.fill_default(-beta);
    L.set(E, E, alpha);
    L.set(E, F, alpha);  // overridden below for e in F
    L.set(F, F, alpha);
    L.set(E, W, alpha);
    L.set(W, W, alpha);
    for (int i = 0; i < m; ++i) {
        L.set_dir(E, Yb[static_cast<std::size_t>(i)], -beta);
        L.set_dir(Yb[static_cast<std::size_t>(i)], E, -beta);
        // within the buffer family everyone cooperates
        L.set(Yb[static_cast<std::size_t>(i)], Yb[static_cast<std::size_t>(i)], alpha);
        L.set(Bb[static_cast<std::size_t>(i)], Bb[static_cast<std::size_t>(i)], alpha);
        L.set(Yb[static_cast<std::size_t>(i)], Bb[static_cast<std::size_t>(i)], alpha);
        // the owning element values its own buffer clique
        for (int y = 0; y < M * M; ++y)
            L.add_exception(L.agent(E, i), L.agent(Yb[static_cast<std::size_t>(i)], y), alpha);
        // blockers welcome every element except their two indices
        L.set(E, Bb[static_cast<std::size_t>(i)], alpha);
        int pos = 0;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            int blocker = L.agent(Bb[static_cast<std::size_t>(i)], pos++);
            L.add_exception(L.agent(E, i), blocker, -beta);
            L.add_exception(blocker, L.agent(E, i), -beta);
            L.add_exception(L.agent(E, j), blocker, -beta);
            L.add_exception(blocker, L.agent(E, j), -beta);
        }
    }
    for (int f = 0; f < nf; ++f)
        for (int e : inst.sets[static_cast<std::size_t>(f)]) {
            L.add_exception(L.agent(E, e), L.agent(F, f), -beta);
            L.add_exception(L.agent(F, f), L.agent(E, e), -beta);
        }
    L.set_dir(z1, z2, alpha);
    L.set_dir(z2, z3, alpha);
    L.set_dir(z3, z1, alpha);

    GadgetBundle b;
    b.game = L.build(false, GameClass::Strict);
    std::vector<std::vector<int>> coals;
    for (int i = 0; i < m; ++i) {
        std::vector<int> c{L.agent(E, i)};
        for (int y : L.block_agents(Yb[static_cast<std::size_t>(i)])) c.push_back(y);
        for (int bb : L.block_agents(Bb[static_cast<std::size_t>(i)])) c.push_back(bb);
        coals.push_back(std::move(c));
    }
    coals.push_back(L.block_agents(F));
    std::vector<int> wz = L.block_agents(W);
    wz.push_back(L.agent(z1));
    wz.push_back(L.agent(z2));
    wz.push_back(L.agent(z3));
    coals.push_back(std::move(wz));
    b.start = Partition::of_coalitions(n, coals);
    b.update = UpdateEvent{{L.agent(z2)}, {L.agent(z3)}, {{L.agent(z2), L.agent(z3), -beta}}};
    b.notion = notion;
    b.budget = m / 3 + 3;
    b.provenance = "thm57";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Aversion-to-enemies reduction from exact cover (budget 2|E|/3 + 1).
/// NS and IS coincide for this symmetric class.
inline GadgetBundle compile_x3c_thm59(const CoverInstance& inst, Notion notion) {
    inst.validate();
    detail::require(inst.variant == CoverVariant::X3C, "variant must be x3c");
    detail::require(notion == Notion::NS || notion == Notion::IS, "notion must be ns or is");
    int m = inst.universe, nf = static_cast<int>(inst.sets.size());
    detail::require(m % 3 == 0, "|E| divisible by 3");
    int M = m + nf + 7;
    detail::GadgetLayout L;
    int E = L.add_block("E", m);
    int F = L.add_block("F", nf);
    int X1 = L.add_block("X1", M * M);
    int X2 = L.add_block("X2", M * M);
    int Y = L.add_block("Y", M * M * M);
    int YF = L.add_block("YF", nf);
    int z1 = L.add_agent("z1");
    int z2 = L.add_agent("z2");
    int W = L.add_block("W", M * M * M * M);
    int n = L.n();
    Rational neg(-static_cast<std::int64_t>(n));
    Rational one(1);
    L.fill_default(neg);
    L.set(E, F, one);  // overridden below for e in F
    L.set(E, X1, one);
    L.set(E, E, one);
    L.set(E, Y, one);
    L.set(E, YF, one);
    L.set(Y, Y, one);
    L.set(YF, YF, one);
    L.set(Y, YF, one);
    L.set(F, X2, one);
    L.set(F, Y, one);
    L.set(F, YF, one);  // overridden below for the own blocker
    L.set(X1, X1, one);
    L.set(X2, X2, one);
    L.set(z1, Y, one);
    L.set(z1, YF, one);
    L.set(z1, W, one);
    L.set(z2, W, one);
    L.set(W, W, one);
    for (int f = 0; f < nf; ++f) {
        for (int e : inst.sets[static_cast<std::size_t>(f)])
            L.add_exception_sym(L.agent(E, e), L.agent(F, f), neg);
        L.add_exception_sym(L.agent(F, f), L.agent(YF, f), neg);
    }

    GadgetBundle b;
    b.game = L.build(true, GameClass::AEG);
    std::vector<int> c1 = L.block_agents(E);
    for (int a : L.block_agents(X1)) c1.push_back(a);
    std::vector<int> c2 = L.block_agents(F);
    for (int a : L.block_agents(X2)) c2.push_back(a);
    std::vector<int> c3{L.agent(z1)};
    for (int a : L.block_agents(Y)) c3.push_back(a);
    for (int a : L.block_agents(YF)) c3.push_back(a);
    std::vector<int> c4{L.agent(z2)};
    for (int a : L.block_agents(W)) c4.push_back(a);
    b.start = Partition::of_coalitions(n, {c1, c2, c3, c4});
    b.update = UpdateEvent{{L.agent(z1)}, {L.agent(z2)}, {{L.agent(z1), L.agent(z2), one}}};
    b.notion = notion;
    b.budget = 2 * m / 3 + 1;
    b.provenance = "thm59";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Friends/enemies (k even, >= 6) and appreciation-of-friends (k >= 8)
/// reductions from regular exact cover. Budgets 2k and 2k-1.
inline GadgetBundle compile_rx3c_thm510(const CoverInstance& inst, Notion notion, bool afg) {
    inst.validate();
    detail::require(inst.variant == CoverVariant::RX3C, "variant must be rx3c");
    detail::require(notion == Notion::NS, "notion must be ns");
    int m = inst.universe;
    detail::require(m % 3 == 0, "|E| divisible by 3");
    int k = m / 3;
    if (afg) {
        detail::require(k >= 8, "k >= 8");
    } else {
        detail::require(k >= 6, "k >= 6");
        detail::require(k % 2 == 0, "k even");
    }
    detail::GadgetLayout L;
    int E = L.add_block("E", m);
    int F = L.add_block("F", m);
    int T = L.add_block("T", 2 * k - 1);
    int W = L.add_block("W", afg ? k - 1 : k);
    int X1 = L.add_block("X1", afg ? 8 * k : 3 * k * k);
    int X2 = afg ? -1 : L.add_block("X2", 3 * k * k);
    int Y1 = L.add_block("Y1", afg ? k - 1 : k / 2 + 1);
    int Y2 = afg ? -1 : L.add_block("Y2", k / 2 + 1);
    int Z = L.add_block("Z", afg ? 3 * k - 1 : 3 * k - 3);
    int n = L.n();
    Rational pos = afg ? Rational(n) : Rational(1);
    L.fill_default(Rational(-1));
    // disjoint sets cooperate
    for (int f = 0; f < m; ++f)
        for (int f2 = f + 1; f2 < m; ++f2) {
            const auto& a = inst.sets[static_cast<std::size_t>(f)];
            const auto& c = inst.sets[static_cast<std::size_t>(f2)];
            bool disjoint = true;
            for (int e : a)
                if (std::find(c.begin(), c.end(), e) != c.end()) { disjoint = false; break; }
            if (disjoint) L.add_exception_sym(L.agent(F, f), L.agent(F, f2), pos);
        }
    L.set(T, F, pos);
    L.set(T, T, pos);
    L.set(E, F, pos);  // overridden below for e in F
    for (int f = 0; f < m; ++f)
        for (int e : inst.sets[static_cast<std::size_t>(f)])
            L.add_exception_sym(L.agent(E, e), L.agent(F, f), Rational(-1));
    L.set(E, E, pos);
    L.set(E, W, pos);
    L.set(W, W, pos);
    L.set(E, Z, pos);
    L.set(W, Y1, pos);
    L.set(W, Z, pos);
    std::vector<int> xyz{X1, Y1, Z};
    if (!afg) {
        // friends/enemies form: elements like X2 and Y1, workers like X1 and
        // both Y halves; the update joins a worker to an X2 agent
        L.set(E, X2, pos);
        L.set(E, Y1, pos);
        L.set(W, X1, pos);
        L.set(W, Y2, pos);
        xyz.push_back(X2);
        xyz.push_back(Y2);
    }
    // appreciation-of-friends form: no worker-X friendships at all; the
    // update creates the only one
    for (std::size_t a = 0; a < xyz.size(); ++a)
        for (std::size_t c = a; c < xyz.size(); ++c) L.set(xyz[a], xyz[c], pos);

    GadgetBundle b;
    b.game = L.build(true, afg ? GameClass::AFG : GameClass::FEG);
    std::vector<int> c1 = L.block_agents(E);
    for (int a : L.block_agents(W)) c1.push_back(a);
    std::vector<int> c2 = L.block_agents(F);
    for (int a : L.block_agents(T)) c2.push_back(a);
    std::vector<int> c3;
    for (int blk : xyz)
        for (int a : L.block_agents(blk)) c3.push_back(a);
    b.start = Partition::of_coalitions(n, {c1, c2, c3});
    int wt = L.agent(W, 0);
    int xt = afg ? L.agent(X1, 0) : L.agent(X2, 0);
    b.update = UpdateEvent{{wt}, {xt}, {{wt, xt, pos}}};
    b.notion = notion;
    b.budget = afg ? 2 * k - 1 : 2 * k;
    b.provenance = afg ? "thm510-afg" : "thm510-feg";
    b.layout = L.layout_map();
    b.source = inst;
    detail::assert_start_stable(b);
    return b;
}

/// Dispatch by theorem selector (the CLI's --theorem tokens).
inline GadgetBundle compile_reduction(const std::string& selector, const CoverInstance& inst,
                                      const ReductionParams& params, Notion notion) {
    if (selector == "thm43") return compile_setcover_thm43(inst, params, notion);
    if (selector == "thm51") return compile_setcover_thm51(inst, params, notion);
    if (selector == "thm52") return compile_setcover_thm52(inst, notion);
    if (selector == "thm58") return compile_setcover_thm58(inst, params, notion);
    if (selector == "thm57") {
        if (inst.variant == CoverVariant::SetCover) return compile_setcover_thm57(inst, params, notion);
        return compile_x3c_thm57(inst, params, notion);
    }
    if (selector == "thm59") return compile_x3c_thm59(inst, notion);
    if (selector == "thm510" || selector == "thm510-feg") return compile_rx3c_thm510(inst, notion, false);
    if (selector == "thm510-afg") return compile_rx3c_thm510(inst, notion, true);
    throw input_error("unknown theorem selector '" + selector + "'");
}

// ---------------------------------------------------------------------------
// Correspondence verification

/// Builds the forward-direction repaired partition a given cover induces.
inline Partition build_witness_partition(const GadgetBundle& b, const std::vector<int>& cover) {
    if (!b.source) throw input_error("bundle carries no cover instance");
    const CoverInstance& src = *b.source;
    std::set<int> C(cover.begin(), cover.end());
    for (int s : cover)
        if (s < 0 || s >= static_cast<int>(src.sets.size()))
            throw input_error("cover set index out of range");
    auto sets_block = [&](const std::string& name) { return b.block(name); };
    int n = b.game.n();

    if (b.provenance == "thm43") {
        std::vector<std::vector<int>> coals;
        for (int e : sets_block("E")) coals.push_back({e});
        const auto& S = sets_block("S");
        for (int s = 0; s < static_cast<int>(S.size()); ++s)
            if (!C.count(s)) coals.push_back({S[static_cast<std::size_t>(s)]});
        std::vector<int> hub;
        for (int s : C) hub.push_back(S[static_cast<std::size_t>(s)]);
        for (int y : sets_block("Y")) hub.push_back(y);
        hub.push_back(b.agent("z1"));
        coals.push_back(hub);
        coals.push_back({b.agent("z2")});
        return Partition::of_coalitions(n, coals);
    }
    if (b.provenance == "thm51") {
        const auto& S = sets_block("S");
        std::vector<int> front = sets_block("E");
        std::vector<int> rest;
        for (int s = 0; s < static_cast<int>(S.size()); ++s)
            (C.count(s) ? front : rest).push_back(S[static_cast<std::size_t>(s)]);
        return Partition::of_coalitions(n, {front, rest, {b.agent("z")}});
    }
    if (b.provenance == "thm52") {
        const auto& S = sets_block("S");
        std::vector<std::vector<int>> coals;
        for (int e : sets_block("E")) coals.push_back({e});
        std::vector<int> rest, hub;
        for (int s = 0; s < static_cast<int>(S.size()); ++s)
            (C.count(s) ? hub : rest).push_back(S[static_cast<std::size_t>(s)]);
        for (int y : sets_block("Y")) hub.push_back(y);
        coals.push_back(rest);
        coals.push_back(hub);
        coals.push_back({b.agent("z1")});
        coals.push_back({b.agent("z2")});
        return Partition::of_coalitions(n, coals);
    }
    if (b.provenance == "thm58") {
        const auto& S = sets_block("S");
        std::vector<std::vector<int>> coals;
        coals.push_back(sets_block("E"));
        std::vector<int> xs;
        for (int s = 0; s < static_cast<int>(S.size()); ++s) {
            if (C.count(s)) xs.push_back(S[static_cast<std::size_t>(s)]);
            else coals.push_back({S[static_cast<std::size_t>(s)]});
        }
        for (int a : sets_block("X1")) xs.push_back(a);
        for (int a : sets_block("X2")) xs.push_back(a);
        coals.push_back(std::move(xs));
        std::vector<int> ys{b.agent("z1"), b.agent("z2")};
        for (int a : sets_block("Y")) ys.push_back(a);
        coals.push_back(std::move(ys));
        return Partition::of_coalitions(n, coals);
    }
    if (b.provenance == "thm57" && b.source->variant == CoverVariant::SetCover) {
        const auto& S = sets_block("S");
        std::vector<int> front = sets_block("E");
        std::vector<int> rest;
        for (int s = 0; s < static_cast<int>(S.size()); ++s)
            (C.count(s) ? front : rest).push_back(S[static_cast<std::size_t>(s)]);
        std::vector<int> hub = sets_block("Y");
        hub.push_back(b.agent("z1"));
        hub.push_back(b.agent("z2"));
        hub.push_back(b.agent("z3"));
        return Partition::of_coalitions(n, {front, rest, hub});
    }
    if (b.provenance == "thm57") {  // exact-cover form
        if (!src.exactly_covered_by(cover)) throw input_error("witness requires an exact cover");
        const auto& F = sets_block("F");
        std::vector<std::vector<int>> coals;
        std::vector<int> rest;
        std::vector<int> cw;
        for (int f = 0; f < static_cast<int>(F.size()); ++f)
            (C.count(f) ? cw : rest).push_back(F[static_cast<std::size_t>(f)]);
        for (int w : sets_block("W")) cw.push_back(w);
        if (!rest.empty()) coals.push_back(rest);
        int m = src.universe;
        for (int i = 0; i < m; ++i) {
            std::vector<int> c{sets_block("E")[static_cast<std::size_t>(i)]};
            for (int y : sets_block("Y" + std::to_string(i))) c.push_back(y);
            for (int bl : sets_block("B" + std::to_string(i))) c.push_back(bl);
            coals.push_back(std::move(c));
        }
        coals.push_back(cw);
        coals.push_back({b.agent("z1")});
        coals.push_back({b.agent("z2")});
        coals.push_back({b.agent("z3")});
        return Partition::of_coalitions(n, coals);
    }
    if (b.provenance == "thm59") {
        if (!src.exactly_covered_by(cover)) throw input_error("witness requires an exact cover");
        const auto& F = sets_block("F");
        const auto& YF = sets_block("YF");
        std::vector<int> c1 = sets_block("E");
        for (int a : sets_block("X1")) c1.push_back(a);
        std::vector<int> c2, c3, c4;
        for (int f = 0; f < static_cast<int>(F.size()); ++f) {
            if (C.count(f)) {
                c3.push_back(F[static_cast<std::size_t>(f)]);
                c4.push_back(YF[static_cast<std::size_t>(f)]);
            } else {
                c2.push_back(F[static_cast<std::size_t>(f)]);
                c3.push_back(YF[static_cast<std::size_t>(f)]);
            }
        }
        for (int a : sets_block("X2")) c2.push_back(a);
        for (int a : sets_block("Y")) c3.push_back(a);
        std::vector<int> c5{b.agent("z1"), b.agent("z2")};
        for (int a : sets_block("W")) c5.push_back(a);
        std::vector<std::vector<int>> coals{c1, c2, c3, c5};
        if (!c4.empty()) coals.push_back(c4);
        return Partition::of_coalitions(n, coals);
    }
    if (b.provenance == "thm510-feg" || b.provenance == "thm510-afg") {
        if (!src.exactly_covered_by(cover)) throw input_error("witness requires an exact cover");
        const auto& F = sets_block("F");
        std::vector<int> c1 = sets_block("E");
        std::vector<int> c2;
        for (int f = 0; f < static_cast<int>(F.size()); ++f)
            (C.count(f) ? c1 : c2).push_back(F[static_cast<std::size_t>(f)]);
        for (int t : sets_block("T")) c2.push_back(t);
        std::vector<int> c3 = sets_block("W");
        for (const char* blk : {"X1", "X2", "Y1", "Y2", "Z"}) {
            auto it = b.layout.find(blk);
            if (it == b.layout.end()) continue;
            for (int a : it->second) c3.push_back(a);
        }
        return Partition::of_coalitions(n, {c1, c2, c3});
    }
    throw input_error("no witness construction for provenance '" + b.provenance + "'");
}

struct WitnessReport {
    bool stable = false;
    int distance = -1;
    int budget = 0;
    bool within_budget = false;
    Partition partition;
    bool ok() const { return stable && within_budget; }
};

/// Forward-direction check: the partition a known cover induces is stable in
/// the altered game and lies within the budget.
inline WitnessReport verify_witness(const GadgetBundle& b, const std::vector<int>& cover) {
    WitnessReport r;
    r.partition = build_witness_partition(b, cover);
    Game altered = b.game.with_update(b.update);
    r.stable = is_stable(altered, r.partition, b.notion);
    r.distance = partition_distance(b.start, r.partition);
    r.budget = b.budget;
    r.within_budget = r.distance <= b.budget;
    return r;
}

struct CorrespondenceReport {
    bool cover_exists = false;
    bool stable_exists = false;
    bool agree = false;
    int stable_distance = -1;
    std::size_t explored = 0;
};

/// Full-iff check on desk-scale bundles: brute-force cover existence against
/// the exact nearby-stable search at the bundle's budget.
inline CorrespondenceReport verify_correspondence_full(const GadgetBundle& b,
                                                       std::size_t visited_cap = kDefaultVisitedCap,
                                                       int jobs = 1) {
    if (!b.source) throw input_error("bundle carries no cover instance");
    CorrespondenceReport r;
    if (b.source->variant == CoverVariant::SetCover) {
        auto best = brute_min_cover(*b.source);
        r.cover_exists = best && *best <= b.source->k;
    } else {
        r.cover_exists = brute_exact_cover(*b.source).has_value();
    }
    SearchOutcome s = nearest_stable(b.as_instance(), visited_cap, jobs);
    r.stable_exists = s.found;
    r.stable_distance = s.distance;
    r.explored = s.explored;
    r.agree = r.cover_exists == r.stable_exists;
    return r;
}

}  // namespace ashg
