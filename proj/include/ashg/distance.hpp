#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ashg/errors.hpp"
#include "ashg/partition.hpp"

namespace ashg {

/// Maximum-weight assignment on a square matrix (Hungarian algorithm with
/// potentials, O(m^3)). Weights must be nonnegative.
inline std::int64_t max_weight_assignment(const std::vector<std::vector<std::int64_t>>& w) {
    int m = static_cast<int>(w.size());
    if (m == 0) return 0;
    const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    // Solve the min-cost version on negated weights; 1-based helper arrays.
    std::vector<std::int64_t> u(static_cast<std::size_t>(m + 1), 0), v(static_cast<std::size_t>(m + 1), 0);
    std::vector<int> match(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
    for (int i = 1; i <= m; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<std::int64_t> minv(static_cast<std::size_t>(m + 1), kInf);
        std::vector<char> used(static_cast<std::size_t>(m + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            int i0 = match[static_cast<std::size_t>(j0)], j1 = -1;
            std::int64_t delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                std::int64_t cur = -w[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)]
                                   - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t total = 0;
    for (int j = 1; j <= m; ++j)
        total += w[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)][static_cast<std::size_t>(j - 1)];
    return total;
}

/// Minimum number of single-agent coalition changes turning `a` into `b`:
/// n minus the best total coalition overlap over injective matchings, with
/// the shorter coalition list padded by empty coalitions.
inline int partition_distance(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw input_error("partitions are over different agent counts");
    int ra = a.coalition_count(), rb = b.coalition_count();
    int m = ra > rb ? ra : rb;
    std::vector<std::vector<std::int64_t>> w(
        static_cast<std::size_t>(m), std::vector<std::int64_t>(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < ra; ++i) {
        for (int agent : a.members(i)) {
            int j = b.coalition_of(agent);
            ++w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    std::int64_t overlap = max_weight_assignment(w);
    return a.n() - static_cast<int>(overlap);
}

}  // namespace ashg
