#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check.

#include <random>

#include "strata/cloud.hpp"
#include "strata/complex.hpp"

namespace oracles {

using strata::Point;
using strata::Scalar;

inline Scalar brute_distance(const Point& a, const Point& b) {
    Scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline Scalar brute_diameter(const std::vector<Point>& pts) {
    Scalar best = 0;
    for (const auto& a : pts)
        for (const auto& b : pts) best = std::max(best, brute_distance(a, b));
    return best;
}

inline Scalar brute_hausdorff(const std::vector<Point>& A, const std::vector<Point>& B) {
    Scalar h = 0;
    for (const auto& a : A) {
        Scalar d = std::numeric_limits<Scalar>::infinity();
        for (const auto& b : B) d = std::min(d, brute_distance(a, b));
        h = std::max(h, d);
    }
    for (const auto& b : B) {
        Scalar d = std::numeric_limits<Scalar>::infinity();
        for (const auto& a : A) d = std::min(d, brute_distance(a, b));
        h = std::max(h, d);
    }
    return h;
}

/// Dense barycentric sweep for point-to-triangle distance.
inline Scalar dense_triangle_distance(const Point& p, const Point& a, const Point& b,
                                      const Point& c, int n = 400) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j + i <= n; ++j) {
            Point q(a.size());
            const Scalar u = static_cast<Scalar>(i) / n, v = static_cast<Scalar>(j) / n;
            for (std::size_t k = 0; k < q.size(); ++k)
                q[k] = a[k] + u * (b[k] - a[k]) + v * (c[k] - a[k]);
            best = std::min(best, brute_distance(p, q));
        }
    return best;
}

/// Dense grid search (with refinement) for the minimum enclosing ball of a
/// triple, over the plane spanned by the points.
inline Scalar dense_meb_radius(const Point& a, const Point& b, const Point& c) {
    // orthonormal basis of the affine hull
    Point e1(a.size()), e2(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        e1[k] = b[k] - a[k];
        e2[k] = c[k] - a[k];
    }
    Scalar n1 = 0;
    for (Scalar x : e1) n1 += x * x;
    n1 = std::sqrt(n1);
    if (n1 == 0) n1 = 1;
    for (Scalar& x : e1) x /= n1;
    Scalar d12 = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d12 += e2[k] * e1[k];
    for (std::size_t k = 0; k < a.size(); ++k) e2[k] -= d12 * e1[k];
    Scalar n2 = 0;
    for (Scalar x : e2) n2 += x * x;
    n2 = std::sqrt(n2);
    if (n2 > 0)
        for (Scalar& x : e2) x /= n2;

    auto radius_at = [&](Scalar u, Scalar v) {
        Point q(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) q[k] = a[k] + u * e1[k] + v * e2[k];
        return std::max({brute_distance(q, a), brute_distance(q, b), brute_distance(q, c)});
    };
    // coarse-to-fine grid search around the triangle
    Scalar span = std::max({brute_distance(a, b), brute_distance(a, c), brute_distance(b, c)});
    if (span == 0) return 0;
    Scalar cu = span / 2, cv = 0, best = radius_at(cu, cv), window = span;
    for (int round = 0; round < 40; ++round) {
        const int steps = 24;
        Scalar bu = cu, bv = cv;
        for (int i = -steps; i <= steps; ++i)
            for (int j = -steps; j <= steps; ++j) {
                const Scalar u = cu + window * i / steps, v = cv + window * j / steps;
                const Scalar r = radius_at(u, v);
                if (r < best) {
                    best = r;
                    bu = u;
                    bv = v;
                }
            }
        cu = bu;
        cv = bv;
        window /= 4;
    }
    return best;
}

// --- independent homology-rank oracle over GF(2) ---------------------------
// rank(H_k(Cech_delta) -> H_k(Cech_gamma)) = dim Z_k(delta) - dim(Z_k(delta)
// ^ B_k(gamma)), computed with plain Gaussian elimination on dense bit rows.

using BitRow = std::vector<std::uint64_t>;

inline void xor_into(BitRow& a, const BitRow& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

inline int topbit(const BitRow& r) {
    for (std::size_t w = r.size(); w-- > 0;)
        if (r[w]) return static_cast<int>(w * 64 + (63 - __builtin_clzll(r[w])));
    return -1;
}

/// Rank of a set of GF(2) rows by elimination; optionally returns a basis.
inline int gf2_rank(std::vector<BitRow> rows, std::vector<BitRow>* basis = nullptr) {
    std::map<int, BitRow> pivots;
    for (auto& r : rows) {
        int t;
        while ((t = topbit(r)) >= 0) {
            auto it = pivots.find(t);
            if (it == pivots.end()) {
                pivots.emplace(t, r);
                break;
            }
            xor_into(r, it->second);
        }
    }
    if (basis) {
        basis->clear();
        for (auto& [t, r] : pivots) basis->push_back(r);
    }
    return static_cast<int>(pivots.size());
}

struct SimplexSets {
    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

inline SimplexSets cech_sets(const strata::PointCloud& P, Scalar scale) {
    SimplexSets s;
    const Scalar r = scale + strata::comparison_slack(scale);
    const Scalar r2 = r * r;
    const std::uint32_t n = static_cast<std::uint32_t>(P.size());
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (strata::min_enclosing_ball_radius_sq(P[i], P[j]) <= r2) s.edges.push_back({i, j});
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            for (std::uint32_t k = j + 1; k < n; ++k)
                if (strata::min_enclosing_ball_radius_sq(P[i], P[j], P[k]) <= r2)
                    s.triangles.push_back({i, j, k});
    return s;
}

/// Independent evaluation of the two-scale homology rank.
inline int rank_oracle(const strata::PointCloud& P, Scalar delta, Scalar gamma, int k) {
    const SimplexSets Kd = cech_sets(P, delta);
    const SimplexSets Kg = cech_sets(P, gamma);
    const std::size_t n = P.size();

    if (k == 0) {
        // rank = dim Z0(delta) - dim(Z0(delta) ^ B0(gamma));
        // Z0(delta) is spanned by all vertices, B0(gamma) by edge boundaries.
        // dim Z0 = n; dim(Z0 ^ B0(gamma)) = rank of gamma edge boundaries.
        const std::size_t words = (n + 63) / 64;
        std::vector<BitRow> rows;
        for (auto [a, b] : Kg.edges) {
            BitRow r(words, 0);
            r[a / 64] ^= 1ull << (a % 64);
            r[b / 64] ^= 1ull << (b % 64);
            rows.push_back(std::move(r));
        }
        return static_cast<int>(n) - gf2_rank(std::move(rows));
    }

    // k == 1: cycle space of the delta 1-skeleton intersected with the
    // boundary space of the gamma triangles, both expressed over gamma edges.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> gidx;
    for (std::size_t e = 0; e < Kg.edges.size(); ++e)
        gidx[{Kg.edges[e][0], Kg.edges[e][1]}] = e;
    const std::size_t ne = Kg.edges.size();
    const std::size_t words = (ne + 63) / 64;
    auto edge_bit = [&](std::uint32_t a, std::uint32_t b) {
        return gidx.at({std::min(a, b), std::max(a, b)});
    };

    // Z1(delta): kernel of the vertex-by-edge boundary matrix of Kd.
    // Build cycles from a spanning forest: fundamental cycles of non-tree
    // delta edges.
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> tree(n);
    std::vector<std::array<std::uint32_t, 2>> nontree;
    for (auto [a, b] : Kd.edges) {
        if (find(a) != find(b)) {
            parent[find(a)] = find(b);
            tree[a].push_back({b, 0});
            tree[b].push_back({a, 0});
        } else {
            nontree.push_back({a, b});
        }
    }
    auto tree_path_row = [&](std::uint32_t a, std::uint32_t b) {
        std::vector<int> prev(n, -1);
        std::vector<std::uint32_t> q{a};
        prev[a] = static_cast<int>(a);
        std::size_t head = 0;
        while (head < q.size() && prev[b] < 0) {
            const auto u = q[head++];
            for (auto [v, unused] : tree[u])
                if (prev[v] < 0) {
                    prev[v] = static_cast<int>(u);
                    q.push_back(v);
                }
        }
        BitRow r(words, 0);
        auto flip = [&](std::uint32_t x, std::uint32_t y) {
            const std::size_t e = edge_bit(x, y);
            r[e / 64] ^= 1ull << (e % 64);
        };
        flip(a, b);
        for (std::uint32_t v = b; prev[v] != static_cast<int>(v);
             v = static_cast<std::uint32_t>(prev[v]))
            flip(v, static_cast<std::uint32_t>(prev[v]));
        return r;
    };
    std::vector<BitRow> zrows;
    for (auto [a, b] : nontree) zrows.push_back(tree_path_row(a, b));
    const int dimZ = gf2_rank(zrows);

    std::vector<BitRow> brows;
    for (auto [a, b, c] : Kg.triangles) {
        BitRow r(words, 0);
        for (auto [x, y] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
            const std::size_t e = edge_bit(x, y);
            r[e / 64] ^= 1ull << (e % 64);
        }
        brows.push_back(std::move(r));
    }
    const int dimB = gf2_rank(brows);

    // dim(Z ^ B) = dim Z + dim B - dim(Z + B)
    std::vector<BitRow> all = zrows;
    all.insert(all.end(), brows.begin(), brows.end());
    const int dimZB = gf2_rank(std::move(all));
    return dimZ - (dimZ + dimB - dimZB);
}

inline strata::PointCloud random_cloud(std::mt19937_64& rng, int n, int dim, Scalar span) {
    std::uniform_real_distribution<Scalar> u(-span, span);
    strata::PointCloud P(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i) {
        Point p(static_cast<std::size_t>(dim));
        for (auto& x : p) x = u(rng);
        P.push_back(p);
    }
    return P;
}

}  // namespace oracles
