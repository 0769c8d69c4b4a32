#pragma once

#include <functional>
#include <numeric>

#include "strata/complex.hpp"

namespace strata {

/// Weight-preserving graph isomorphism test for incidence graphs.
/// Colour refinement (weight + iterated neighbour-colour multisets) prunes
/// the search; backtracking finishes it.  Intended for small graphs.
inline bool graphs_isomorphic(const IncidenceGraph& a, const IncidenceGraph& b) {
    const int n = static_cast<int>(a.nodes.size());
    if (n != static_cast<int>(b.nodes.size()) || a.arcs.size() != b.arcs.size()) return false;
    if (a.weight_counts() != b.weight_counts()) return false;

    auto adjacency = [](const IncidenceGraph& g) {
        std::vector<std::vector<int>> adj(g.nodes.size());
        for (auto [i, j] : g.arcs) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
        return adj;
    };
    const auto adjA = adjacency(a), adjB = adjacency(b);

    auto refine = [](const IncidenceGraph& g, const std::vector<std::vector<int>>& adj) {
        const int n = static_cast<int>(g.nodes.size());
        std::vector<long long> colour(n);
        for (int i = 0; i < n; ++i) colour[i] = g.nodes[i].weight;
        for (int round = 0; round < n; ++round) {
            std::vector<std::pair<std::vector<long long>, int>> sig(n);
            for (int i = 0; i < n; ++i) {
                std::vector<long long> s;
                s.push_back(colour[i]);
                std::vector<long long> nb;
                for (int j : adj[i]) nb.push_back(colour[j]);
                std::sort(nb.begin(), nb.end());
                s.insert(s.end(), nb.begin(), nb.end());
                sig[i] = {std::move(s), i};
            }
            auto sorted = sig;
            std::sort(sorted.begin(), sorted.end());
            std::vector<long long> next(n);
            long long c = 0;
            for (int k = 0; k < n; ++k) {
                if (k > 0 && sorted[k].first != sorted[k - 1].first) ++c;
                next[sorted[k].second] = c;
            }
            if (next == colour) break;
            colour = next;
        }
        return colour;
    };

    const auto colA = refine(a, adjA), colB = refine(b, adjB);
    {
        auto sa = colA, sb = colB;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }

    // backtracking, most-constrained-first
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return adjA[x].size() > adjA[y].size(); });

    std::vector<int> map_ab(n, -1), map_ba(n, -1);
    auto edge_b = [&](int i, int j) {
        return b.arcs.count({std::min(i, j), std::max(i, j)}) > 0;
    };
    auto edge_a = [&](int i, int j) {
        return a.arcs.count({std::min(i, j), std::max(i, j)}) > 0;
    };

    std::function<bool(int)> go = [&](int k) -> bool {
        if (k == n) return true;
        const int u = order[k];
        for (int v = 0; v < n; ++v) {
            if (map_ba[v] != -1) continue;
            if (colA[u] != colB[v]) continue;
            bool ok = true;
            for (int w = 0; ok && w < n; ++w)
                if (map_ab[w] != -1 && edge_a(u, w) != edge_b(v, map_ab[w])) ok = false;
            if (!ok) continue;
            map_ab[u] = v;
            map_ba[v] = u;
            if (go(k + 1)) return true;
            map_ab[u] = -1;
            map_ba[v] = -1;
        }
        return false;
    };
    return go(0);
}

}  // namespace strata
