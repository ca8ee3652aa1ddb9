#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ashg/errors.hpp"
#include "ashg/rational.hpp"

namespace ashg {

/// Valuation-restriction classes. FENG/FEG/AFG/AEG pin the allowed values to
/// {-1,0,1}, {-1,1}, {-1,n}, {-n,1}; Strict only forbids zero.
enum class GameClass { General, Strict, FENG, FEG, AFG, AEG };

inline std::string game_class_name(GameClass c) {
    switch (c) {
        case GameClass::General: return "general";
        case GameClass::Strict: return "strict";
        case GameClass::FENG: return "feng";
        case GameClass::FEG: return "feg";
        case GameClass::AFG: return "afg";
        case GameClass::AEG: return "aeg";
    }
    return "general";
}

inline GameClass game_class_from_name(const std::string& s) {
    if (s == "general") return GameClass::General;
    if (s == "strict") return GameClass::Strict;
    if (s == "feng") return GameClass::FENG;
    if (s == "feg") return GameClass::FEG;
    if (s == "afg") return GameClass::AFG;
    if (s == "aeg") return GameClass::AEG;
    throw input_error("unknown game class '" + s + "'");
}

/// The class's full value set for generators (the unrestricted classes get a
/// small representative palette).
inline std::vector<Rational> default_palette(GameClass cls, int n) {
    switch (cls) {
        case GameClass::FEG: return {Rational(-1), Rational(1)};
        case GameClass::FENG: return {Rational(-1), Rational(0), Rational(1)};
        case GameClass::AFG: return {Rational(-1), Rational(n)};
        case GameClass::AEG: return {Rational(-n), Rational(1)};
        case GameClass::Strict: return {Rational(-2), Rational(-1), Rational(1), Rational(2)};
        case GameClass::General:
            return {Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)};
    }
    return {Rational(-1), Rational(1)};
}

/// A valuation update: entries may only touch pairs in D x E (or the
/// symmetric closure for symmetric games).
struct UpdateEvent {
    std::vector<int> D;
    std::vector<int> E;
    std::vector<std::tuple<int, int, Rational>> entries;

    bool empty() const { return entries.empty(); }

    /// For single-pair updates, the touched pair and its new value.
    std::tuple<int, int, Rational> single_pair() const {
        if (entries.size() == 1) return entries.front();
        if (entries.size() == 2) {
            auto [i1, j1, v1] = entries[0];
            auto [i2, j2, v2] = entries[1];
            if (i1 == j2 && j1 == i2 && v1 == v2) return entries[0];
        }
        throw contract_error("update does not touch exactly one pair");
    }
};

/// An additively separable game: agent count, a total valuation map on
/// ordered pairs (i != j), a symmetry flag and a class tag. Small games use
/// a dense table; reduction gadgets with tens of thousands of agents use a
/// block-structured backend (per-agent block labels, a block-pair value
/// matrix, and a short list of exceptional pairs).
class Game {
public:
    struct BlockSpec {
        std::vector<int> block_of;                             // agent -> block id
        std::vector<Rational> values;                          // nblocks x nblocks
        std::vector<std::tuple<int, int, Rational>> exceptions;  // ordered pairs
    };

    Game() = default;

    static Game dense(int n, bool symmetric, GameClass cls, std::vector<Rational> table) {
        if (n < 1) throw input_error("game needs at least one agent");
        if (table.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
            throw input_error("dense valuation table must have n*n entries");
        Game g;
        g.n_ = n;
        g.symmetric_ = symmetric;
        g.cls_ = cls;
        g.dense_ = std::move(table);
        for (int i = 0; i < n; ++i) g.dense_[g.idx(i, i)] = Rational(0);
        g.validate();
        return g;
    }

    static Game blocky(int n, bool symmetric, GameClass cls, BlockSpec spec) {
        if (n < 1) throw input_error("game needs at least one agent");
        if (spec.block_of.size() != static_cast<std::size_t>(n))
            throw input_error("block_of must label every agent");
        int nb = 0;
        for (int b : spec.block_of) {
            if (b < 0) throw input_error("negative block id");
            nb = std::max(nb, b + 1);
        }
        if (spec.values.size() != static_cast<std::size_t>(nb) * static_cast<std::size_t>(nb))
            throw input_error("block value matrix must be nblocks^2");
        Game g;
        g.n_ = n;
        g.symmetric_ = symmetric;
        g.cls_ = cls;
        g.blocks_ = Blocks{};
        g.blocks_->nblocks = nb;
        g.blocks_->block_of = std::move(spec.block_of);
        g.blocks_->values = std::move(spec.values);
        g.blocks_->exc_rows.assign(static_cast<std::size_t>(n), {});
        for (auto& [i, j, v] : spec.exceptions) g.set_exception(i, j, v);
        g.finish_exceptions();
        g.validate();
        return g;
    }

    int n() const { return n_; }
    bool symmetric() const { return symmetric_; }
    GameClass cls() const { return cls_; }
    bool uses_blocks() const { return blocks_.has_value(); }

    // Block-backend introspection (valid only when uses_blocks()).
    int block_count() const { return blocks_->nblocks; }
    int block_of(int i) const { return blocks_->block_of[static_cast<std::size_t>(i)]; }
    const Rational& block_value(int bi, int bj) const {
        return blocks_->values[static_cast<std::size_t>(bi) * static_cast<std::size_t>(blocks_->nblocks) +
                               static_cast<std::size_t>(bj)];
    }
    /// Agent i's exceptional pairs, sorted by partner id.
    const std::vector<std::pair<int, Rational>>& exception_row(int i) const {
        return blocks_->exc_rows[static_cast<std::size_t>(i)];
    }

    const Rational& value(int i, int j) const {
        if (i == j) return zero_;
        if (blocks_) {
            const auto& row = blocks_->exc_rows[static_cast<std::size_t>(i)];
            if (!row.empty()) {
                auto it = std::lower_bound(row.begin(), row.end(), j,
                                           [](const auto& e, int jj) { return e.first < jj; });
                if (it != row.end() && it->first == j) return it->second;
            }
            return blocks_->values[static_cast<std::size_t>(blocks_->block_of[static_cast<std::size_t>(i)]) *
                                       static_cast<std::size_t>(blocks_->nblocks) +
                                   static_cast<std::size_t>(blocks_->block_of[static_cast<std::size_t>(j)])];
        }
        return dense_[idx(i, j)];
    }

    /// True when no stored valuation equals zero.
    bool is_strict_values() const {
        bool strict = true;
        for_each_distinct_value([&](const Rational& v) {
            if (v.is_zero()) strict = false;
        });
        return strict;
    }

    /// The set of distinct negative values present in the game.
    std::vector<Rational> distinct_negative_values() const {
        std::set<std::string> seen;
        std::vector<Rational> out;
        auto note = [&](const Rational& v) {
            if (v.sign() < 0 && seen.insert(v.str()).second) out.push_back(v);
        };
        if (blocks_) {
            for_each_distinct_value(note);
        } else {
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    if (i != j) note(value(i, j));
        }
        return out;
    }

    /// Returns a copy with the given entries replaced. Entries must respect
    /// the D/E footprint; symmetric games receive both directions.
    Game with_update(const UpdateEvent& u) const {
        auto in = [](const std::vector<int>& v, int x) {
            return std::find(v.begin(), v.end(), x) != v.end();
        };
        for (std::size_t s = 0; s < u.entries.size(); ++s) {
            auto [i1, j1, v1] = u.entries[s];
            for (std::size_t t = s + 1; t < u.entries.size(); ++t) {
                auto [i2, j2, v2] = u.entries[t];
                bool same = (i1 == i2 && j1 == j2) || (symmetric_ && i1 == j2 && j1 == i2);
                if (same && !(v1 == v2))
                    throw contract_error("conflicting update entries for one pair");
            }
        }
        Game g = *this;
        for (const auto& [i, j, v] : u.entries) {
            if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j)
                throw input_error("update entry references invalid agent pair");
            bool ok = (in(u.D, i) && in(u.E, j)) || (symmetric_ && in(u.D, j) && in(u.E, i));
            if (!ok)
                throw contract_error("update entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") falls outside the D x E footprint");
            g.set_value(i, j, v);
            if (symmetric_) g.set_value(j, i, v);
        }
        g.validate();
        return g;
    }

private:
    struct Blocks {
        int nblocks = 0;
        std::vector<int> block_of;
        std::vector<Rational> values;
        // Per-agent exception rows, sorted by partner id.
        std::vector<std::vector<std::pair<int, Rational>>> exc_rows;
    };

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    void set_exception(int i, int j, const Rational& v) {
        if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j)
            throw input_error("exception references invalid agent pair");
        blocks_->exc_rows[static_cast<std::size_t>(i)].emplace_back(j, v);
    }

    void finish_exceptions() {
        if (!blocks_) return;
        for (auto& row : blocks_->exc_rows) {
            std::sort(row.begin(), row.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t t = 1; t < row.size(); ++t)
                if (row[t].first == row[t - 1].first && !(row[t].second == row[t - 1].second))
                    throw input_error("conflicting exception values for one pair");
            row.erase(std::unique(row.begin(), row.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; }),
                      row.end());
        }
    }

    void set_value(int i, int j, const Rational& v) {
        if (blocks_) {
            auto& row = blocks_->exc_rows[static_cast<std::size_t>(i)];
            auto it = std::lower_bound(row.begin(), row.end(), j,
                                       [](const auto& e, int jj) { return e.first < jj; });
            if (it != row.end() && it->first == j) it->second = v;
            else row.insert(it, {j, v});
        } else {
            dense_[idx(i, j)] = v;
        }
    }

    template <class F>
    void for_each_distinct_value(F&& f) const {
        if (blocks_) {
            for (const auto& v : blocks_->values) f(v);
            for (const auto& row : blocks_->exc_rows)
                for (const auto& [j, v] : row) f(v);
        } else {
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    if (i != j) f(dense_[idx(i, j)]);
        }
    }

    void validate() const {
        if (symmetric_ && !blocks_) {
            for (int i = 0; i < n_; ++i)
                for (int j = i + 1; j < n_; ++j)
                    if (value(i, j) != value(j, i))
                        throw input_error("symmetric game with asymmetric valuations at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (cls_ == GameClass::General) return;
        const Rational nval(n_);
        auto allowed = [&](const Rational& v) {
            switch (cls_) {
                case GameClass::Strict: return !v.is_zero();
                case GameClass::FENG: return v == Rational(-1) || v.is_zero() || v == Rational(1);
                case GameClass::FEG: return v == Rational(-1) || v == Rational(1);
                case GameClass::AFG: return v == Rational(-1) || v == nval;
                case GameClass::AEG: return v == -nval || v == Rational(1);
                case GameClass::General: return true;
            }
            return true;
        };
        bool ok = true;
        std::string bad;
        for_each_distinct_value([&](const Rational& v) {
            if (ok && !allowed(v)) { ok = false; bad = v.str(); }
        });
        // unused block-pair slots must also hold legal values
        if (!ok)
            throw class_violation_error("value " + bad + " is outside class " + game_class_name(cls_));
    }

    int n_ = 0;
    bool symmetric_ = false;
    GameClass cls_ = GameClass::General;
    std::vector<Rational> dense_;
    std::optional<Blocks> blocks_;
    inline static const Rational zero_{};
};

}  // namespace ashg
