#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ashg/errors.hpp"

namespace ashg {

/// A partition of agents 0..n-1 into nonempty coalitions, kept in canonical
/// form: coalitions ordered by their minimum agent id, members ascending.
/// Under that ordering the agent->coalition assignment is a restricted
/// growth string, which doubles as the deduplication key.
class Partition {
public:
    /// Target marker for "leave and form a fresh singleton coalition".
    static constexpr int kNewCoalition = -1;

    Partition() = default;

    static Partition singletons(int n) {
        std::vector<int> a(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i;
        return of_assignment(a);
    }

    static Partition grand(int n) {
        if (n <= 0) throw input_error("partition needs at least one agent");
        return of_assignment(std::vector<int>(static_cast<std::size_t>(n), 0));
    }

    /// Builds from explicit coalitions; they must disjointly cover 0..n-1.
    static Partition of_coalitions(int n, const std::vector<std::vector<int>>& groups) {
        std::vector<int> a(static_cast<std::size_t>(n), -1);
        int label = 0;
        for (const auto& g : groups) {
            if (g.empty()) throw input_error("empty coalition");
            for (int agent : g) {
                if (agent < 0 || agent >= n) throw input_error("agent id out of range in coalition");
                if (a[static_cast<std::size_t>(agent)] != -1)
                    throw input_error("agent " + std::to_string(agent) + " appears in two coalitions");
                a[static_cast<std::size_t>(agent)] = label;
            }
            ++label;
        }
        for (int i = 0; i < n; ++i)
            if (a[static_cast<std::size_t>(i)] == -1)
                throw input_error("agent " + std::to_string(i) + " missing from partition");
        return of_assignment(a);
    }

    /// Builds from an arbitrary labeling (labels need not be dense).
    static Partition of_assignment(const std::vector<int>& raw) {
        Partition p;
        p.build(raw);
        return p;
    }

    int n() const { return static_cast<int>(assign_.size()); }
    int coalition_count() const { return static_cast<int>(coalitions_.size()); }
    const std::vector<std::vector<int>>& coalitions() const { return coalitions_; }
    const std::vector<int>& members(int idx) const { return coalitions_[static_cast<std::size_t>(idx)]; }
    int coalition_of(int agent) const {
        if (agent < 0 || agent >= n()) throw input_error("agent id out of range");
        return assign_[static_cast<std::size_t>(agent)];
    }
    int coalition_size(int agent) const {
        return static_cast<int>(members(coalition_of(agent)).size());
    }
    const std::vector<int>& assignment() const { return assign_; }

    int count_singletons() const {
        int c = 0;
        for (const auto& g : coalitions_)
            if (g.size() == 1) ++c;
        return c;
    }

    /// One single-agent move. `target` is a coalition index of this
    /// partition or kNewCoalition. Moving to the current coalition, or to a
    /// fresh singleton from a singleton, is rejected as a no-op.
    Partition move(int agent, int target) const {
        int own = coalition_of(agent);
        if (target == kNewCoalition) {
            if (members(own).size() == 1) throw input_error("agent is already a singleton");
        } else {
            if (target < 0 || target >= coalition_count()) throw input_error("target coalition out of range");
            if (target == own) throw input_error("target equals current coalition");
        }
        std::vector<int> a = assign_;
        a[static_cast<std::size_t>(agent)] = target == kNewCoalition ? coalition_count() : target;
        return of_assignment(a);
    }

    /// Canonical byte key (the restricted growth string).
    const std::string& key() const { return key_; }

    bool operator==(const Partition& o) const { return assign_ == o.assign_; }
    bool operator!=(const Partition& o) const { return !(*this == o); }
    bool operator<(const Partition& o) const { return key_ < o.key_; }

private:
    void build(const std::vector<int>& raw) {
        if (raw.empty()) throw input_error("partition needs at least one agent");
        int n = static_cast<int>(raw.size());
        std::vector<int> relabel(raw.size(), -1);
        assign_.assign(raw.size(), -1);
        coalitions_.clear();
        for (int i = 0; i < n; ++i) {
            int lab = raw[static_cast<std::size_t>(i)];
            if (lab < 0 || lab >= n) throw input_error("coalition label out of range");
            if (relabel[static_cast<std::size_t>(lab)] == -1) {
                relabel[static_cast<std::size_t>(lab)] = static_cast<int>(coalitions_.size());
                coalitions_.emplace_back();
            }
            int idx = relabel[static_cast<std::size_t>(lab)];
            assign_[static_cast<std::size_t>(i)] = idx;
            coalitions_[static_cast<std::size_t>(idx)].push_back(i);
        }
        key_.clear();
        key_.reserve(raw.size() * (n > 255 ? 2 : 1));
        if (n > 255) {
            for (int v : assign_) {
                key_.push_back(static_cast<char>(v & 0xff));
                key_.push_back(static_cast<char>((v >> 8) & 0xff));
            }
        } else {
            for (int v : assign_) key_.push_back(static_cast<char>(v));
        }
    }

    std::vector<int> assign_;
    std::vector<std::vector<int>> coalitions_;
    std::string key_;
};

}  // namespace ashg
