#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>

#include "strata/cloud.hpp"

namespace strata {

/// Graph on cloud indices with edges between pairs at distance <= r (closed).
struct ThresholdGraph {
    std::vector<std::uint32_t> nodes;                 // cloud indices
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // positions into nodes
    std::vector<std::vector<std::uint32_t>> adj;      // by position

    std::size_t size() const { return nodes.size(); }
};

inline ThresholdGraph threshold_graph(const PointCloud& P, Scalar r,
                                      const std::vector<std::uint32_t>* subset = nullptr) {
    if (r < 0) throw std::invalid_argument("threshold must be nonnegative");
    ThresholdGraph g;
    if (subset) g.nodes = *subset;
    else {
        g.nodes.resize(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) g.nodes[i] = static_cast<std::uint32_t>(i);
    }
    g.adj.resize(g.nodes.size());
    const Scalar bound = r + comparison_slack(r);
    const Scalar b2 = bound * bound;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j)
            if (squared_distance(P[g.nodes[i]], P[g.nodes[j]]) <= b2) {
                g.edges.emplace_back(i, j);
                g.adj[i].push_back(static_cast<std::uint32_t>(j));
                g.adj[j].push_back(static_cast<std::uint32_t>(i));
            }
    return g;
}

/// Cloud indices path-connected to the cloud index p inside g.
inline std::vector<std::uint32_t> connected_component_of(const ThresholdGraph& g,
                                                         std::uint32_t p) {
    std::size_t start = g.nodes.size();
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i] == p) { start = i; break; }
    if (start == g.nodes.size()) throw std::invalid_argument("index not in threshold graph");
    std::vector<char> seen(g.nodes.size(), 0);
    std::deque<std::uint32_t> q{static_cast<std::uint32_t>(start)};
    seen[start] = 1;
    std::vector<std::uint32_t> out;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop_front();
        out.push_back(g.nodes[u]);
        for (auto v : g.adj[u])
            if (!seen[v]) { seen[v] = 1; q.push_back(v); }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All connected components, each sorted; components ordered by smallest member.
inline std::vector<std::vector<std::uint32_t>> connected_components(const ThresholdGraph& g) {
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<std::vector<std::uint32_t>> comps;
    for (std::size_t s = 0; s < g.nodes.size(); ++s) {
        if (seen[s]) continue;
        std::deque<std::uint32_t> q{static_cast<std::uint32_t>(s)};
        seen[s] = 1;
        std::vector<std::uint32_t> comp;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop_front();
            comp.push_back(g.nodes[u]);
            for (auto v : g.adj[u])
                if (!seen[v]) { seen[v] = 1; q.push_back(v); }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

/// Cech complex up to dimension 2: a simplex is included iff the radius of
/// its smallest enclosing ball is at most the scale (closed, with slack).
struct CechComplex {
    Scalar scale = 0;
    std::size_t vertex_count = 0;
    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

inline CechComplex cech(const PointCloud& P, Scalar scale, int max_dim = 2) {
    if (scale < 0) throw std::invalid_argument("scale must be nonnegative");
    if (max_dim != 2) throw std::invalid_argument("only 2-skeletons are supported");
    CechComplex K;
    K.scale = scale;
    K.vertex_count = P.size();
    const Scalar s = scale + comparison_slack(scale);
    const Scalar s2 = s * s;
    const std::uint32_t n = static_cast<std::uint32_t>(P.size());
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (min_enclosing_ball_radius_sq(P[i], P[j]) <= s2) K.edges.push_back({i, j});
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (min_enclosing_ball_radius_sq(P[i], P[j]) > s2) continue;
            for (std::uint32_t k = j + 1; k < n; ++k)
                if (min_enclosing_ball_radius_sq(P[i], P[j], P[k]) <= s2)
                    K.triangles.push_back({i, j, k});
        }
    return K;
}

namespace detail {

/// Two-tier boundary-matrix reduction over Z/2.  Input simplices are the
/// 2-skeleton of the gamma-scale Cech complex, each tagged tier 0 (present at
/// delta) or tier 1 (gamma only).  Vertices all sit in tier 0.  Returns the
/// ranks of the maps induced by inclusion on H0 and H1.
struct TwoScaleInput {
    std::size_t vertex_count = 0;
    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<char> edge_tier;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<char> triangle_tier;
};

inline std::pair<int, int> two_scale_ranks(const TwoScaleInput& in) {
    const std::size_t nv = in.vertex_count;
    const std::size_t ne = in.edges.size();
    const std::size_t nt = in.triangles.size();

    // filtration order: vertices, then edges and triangles sorted by
    // (tier, dim, lexicographic vertex ids)
    std::vector<std::uint32_t> eorder(ne), torder(nt);
    for (std::size_t i = 0; i < ne; ++i) eorder[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < nt; ++i) torder[i] = static_cast<std::uint32_t>(i);
    std::sort(eorder.begin(), eorder.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (in.edge_tier[a] != in.edge_tier[b]) return in.edge_tier[a] < in.edge_tier[b];
        return in.edges[a] < in.edges[b];
    });
    std::sort(torder.begin(), torder.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (in.triangle_tier[a] != in.triangle_tier[b])
            return in.triangle_tier[a] < in.triangle_tier[b];
        return in.triangles[a] < in.triangles[b];
    });
    // global positions: vertices 0..nv-1; edges by tier/order; triangles interleave
    // after the edges of their tier.  Faces always precede cofaces because a
    // face's ball radius is no larger than its coface's.
    // We process dimensions separately; only "low" bookkeeping is shared.

    // --- H0: pair vertices with edges --------------------------------------
    // union-find replicates the reduction of the vertex/edge part exactly:
    // an edge is negative iff it merges two components.
    std::vector<std::uint32_t> parent(nv);
    for (std::size_t i = 0; i < nv; ++i) parent[i] = static_cast<std::uint32_t>(i);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t merges = 0;
    for (std::uint32_t ei : eorder) {
        const auto [a, b] = std::pair(in.edges[ei][0], in.edges[ei][1]);
        const auto ra = find(a), rb = find(b);
        if (ra != rb) { parent[ra] = rb; ++merges; }
    }
    // every vertex is born in tier 0; classes never die except by merging
    const int rk0 = static_cast<int>(nv - merges);

    // --- H1: reduce triangle columns over edge indices ---------------------
    // edge position in filtration order
    std::vector<std::uint32_t> epos(ne);
    for (std::size_t i = 0; i < ne; ++i) epos[eorder[i]] = static_cast<std::uint32_t>(i);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> eindex;
    for (std::size_t i = 0; i < ne; ++i)
        eindex[{in.edges[i][0], in.edges[i][1]}] = static_cast<std::uint32_t>(i);

    // positive edges create cycles; find them by re-running union-find
    for (std::size_t i = 0; i < nv; ++i) parent[i] = static_cast<std::uint32_t>(i);
    std::vector<char> edge_positive(ne, 0);
    for (std::uint32_t ei : eorder) {
        const auto ra = find(in.edges[ei][0]), rb = find(in.edges[ei][1]);
        if (ra == rb) edge_positive[ei] = 1;
        else parent[ra] = rb;
    }

    // reduce triangles in filtration order; columns hold edge positions
    std::vector<std::int64_t> low_owner(ne, -1);  // edge position -> triangle column storage
    std::vector<std::vector<std::uint32_t>> stored(nt);
    std::vector<char> edge_killed(ne, 0);  // by edge filtration position
    for (std::uint32_t tcol = 0; tcol < nt; ++tcol) {
        const auto& t = in.triangles[torder[tcol]];
        std::vector<std::uint32_t> col;
        col.reserve(3);
        col.push_back(epos[eindex[{t[0], t[1]}]]);
        col.push_back(epos[eindex[{t[0], t[2]}]]);
        col.push_back(epos[eindex[{t[1], t[2]}]]);
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const std::uint32_t low = col.back();
            const std::int64_t other = low_owner[low];
            if (other < 0) {
                low_owner[low] = tcol;
                edge_killed[low] = 1;
                stored[tcol] = col;
                break;
            }
            // symmetric difference with the stored column
            std::vector<std::uint32_t> merged;
            std::set_symmetric_difference(col.begin(), col.end(), stored[other].begin(),
                                          stored[other].end(), std::back_inserter(merged));
            col = std::move(merged);
        }
    }

    int rk1 = 0;
    for (std::size_t i = 0; i < ne; ++i) {
        const std::uint32_t ei = eorder[i];
        if (edge_positive[ei] && in.edge_tier[ei] == 0 && !edge_killed[i]) ++rk1;
    }
    return {rk0, rk1};
}

}  // namespace detail

/// Rank of the map H_k(Cech_delta(P)) -> H_k(Cech_gamma(P)) over Z/2, for
/// k in {0,1}: the number of k-classes born at or before delta that survive
/// to gamma.  Computed by two-tier column reduction of the boundary matrix.
inline int homology_rank_of_inclusion(const PointCloud& P, Scalar delta, Scalar gamma, int k) {
    if (!(delta <= gamma)) throw std::invalid_argument("need delta <= gamma");
    if (k != 0 && k != 1) throw std::invalid_argument("k must be 0 or 1");
    const Scalar sd = delta + comparison_slack(delta);
    const Scalar sg = gamma + comparison_slack(gamma);
    const Scalar sd2 = sd * sd, sg2 = sg * sg;
    detail::TwoScaleInput in;
    in.vertex_count = P.size();
    const std::uint32_t n = static_cast<std::uint32_t>(P.size());
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const Scalar r2 = min_enclosing_ball_radius_sq(P[i], P[j]);
            if (r2 <= sg2) {
                in.edges.push_back({i, j});
                in.edge_tier.push_back(r2 <= sd2 ? 0 : 1);
            }
        }
    // triangles only affect H1
    if (k == 1) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (min_enclosing_ball_radius_sq(P[i], P[j]) > sg2) continue;
                for (std::uint32_t kk = j + 1; kk < n; ++kk) {
                    if (min_enclosing_ball_radius_sq(P[i], P[kk]) > sg2 ||
                        min_enclosing_ball_radius_sq(P[j], P[kk]) > sg2)
                        continue;
                    const Scalar r2 = min_enclosing_ball_radius_sq(P[i], P[j], P[kk]);
                    if (r2 <= sg2) {
                        in.triangles.push_back({i, j, kk});
                        in.triangle_tier.push_back(r2 <= sd2 ? 0 : 1);
                    }
                }
            }
    }
    auto [rk0, rk1] = detail::two_scale_ranks(in);
    return k == 0 ? rk0 : rk1;
}

}  // namespace strata
