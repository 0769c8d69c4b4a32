#pragma once

#include <functional>
#include <sstream>

#include "strata/complex.hpp"

namespace strata {

struct Violation {
    std::string condition;  // e.g. "embedding.4" or "assumption.12"
    std::string detail;
    Scalar measured = 0;
    Scalar bound = 0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }

    void add(std::string cond, std::string detail, Scalar measured = 0, Scalar bound = 0) {
        violations.push_back({std::move(cond), std::move(detail), measured, bound});
    }
};

inline std::string cell_name(const Cell& c) {
    std::ostringstream os;
    static const char* prefix[3] = {"v", "e", "t"};
    os << prefix[c.dim];
    for (int i = 0; i <= c.dim; ++i) os << (i ? "-" : "") << c.v[i];
    return os.str();
}

namespace detail {

/// Exact-to-machine-precision distance between two segments.
inline Scalar distance_segment_segment(std::span<const Scalar> a0, std::span<const Scalar> a1,
                                       std::span<const Scalar> b0, std::span<const Scalar> b1) {
    const Point d1 = sub(a1, a0), d2 = sub(b1, b0), r = sub(a0, b0);
    const Scalar A = dot(d1, d1), E = dot(d2, d2), F = dot(d2, r);
    Scalar s = 0, t = 0;
    if (A == 0 && E == 0) return distance(a0, b0);
    if (A == 0) {
        t = std::clamp<Scalar>(F / E, 0, 1);
    } else {
        const Scalar C = dot(d1, r);
        if (E == 0) {
            s = std::clamp<Scalar>(-C / A, 0, 1);
        } else {
            const Scalar B = dot(d1, d2), denom = A * E - B * B;
            if (denom > 0) s = std::clamp<Scalar>((B * F - C * E) / denom, 0, 1);
            t = (B * s + F) / E;
            if (t < 0) { t = 0; s = std::clamp<Scalar>(-C / A, 0, 1); }
            else if (t > 1) { t = 1; s = std::clamp<Scalar>((B - C) / A, 0, 1); }
        }
    }
    return distance(axpy(a0, s, d1), axpy(b0, t, d2));
}

/// Distance between a segment and a triangle via convex 1-d minimisation of
/// the (convex) squared distance along the segment.
inline Scalar distance_segment_triangle(std::span<const Scalar> s0, std::span<const Scalar> s1,
                                        std::span<const Scalar> a, std::span<const Scalar> b,
                                        std::span<const Scalar> c) {
    const Point d = sub(s1, s0);
    auto f = [&](Scalar t) {
        const Point p = axpy(s0, t, d);
        const Point q = closest_point_on_triangle(p, a, b, c);
        return squared_distance(p, q);
    };
    Scalar lo = 0, hi = 1;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const Scalar m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) <= f(m2)) hi = m2; else lo = m1;
    }
    return std::sqrt(f((lo + hi) / 2));
}

inline Scalar distance_triangle_triangle(const std::array<Point, 3>& A,
                                         const std::array<Point, 3>& B) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < 3; ++i) {
        best = std::min(best, distance_segment_triangle(A[i], A[(i + 1) % 3], B[0], B[1], B[2]));
        best = std::min(best, distance_segment_triangle(B[i], B[(i + 1) % 3], A[0], A[1], A[2]));
    }
    return best;
}

inline Scalar distance_cells(const LinearEmbedding& E, const Cell& s, const Cell& t) {
    auto P = [&](VertexId v) -> const Point& { return E.at(v); };
    if (s.dim > t.dim) return distance_cells(E, t, s);
    if (s.dim == 0) return E.distance_to_cell(P(s.v[0]), t);
    if (s.dim == 1 && t.dim == 1)
        return distance_segment_segment(P(s.v[0]), P(s.v[1]), P(t.v[0]), P(t.v[1]));
    if (s.dim == 1)
        return distance_segment_triangle(P(s.v[0]), P(s.v[1]), P(t.v[0]), P(t.v[1]), P(t.v[2]));
    return distance_triangle_triangle({P(s.v[0]), P(s.v[1]), P(s.v[2])},
                                      {P(t.v[0]), P(t.v[1]), P(t.v[2])});
}

/// Null space basis of an n x m matrix (m <= 4), by Gaussian elimination.
inline std::vector<std::array<Scalar, 4>> null_space(const std::vector<std::array<Scalar, 4>>& rows,
                                                     int m, Scalar tol) {
    std::vector<std::array<Scalar, 4>> R = rows;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < m && rank < static_cast<int>(R.size()); ++col) {
        int best = -1;
        Scalar bestv = tol;
        for (int r = rank; r < static_cast<int>(R.size()); ++r)
            if (std::abs(R[r][col]) > bestv) { bestv = std::abs(R[r][col]); best = r; }
        if (best < 0) continue;
        std::swap(R[rank], R[best]);
        const Scalar piv = R[rank][col];
        for (int r = 0; r < static_cast<int>(R.size()); ++r) {
            if (r == rank) continue;
            const Scalar f = R[r][col] / piv;
            for (int c2 = 0; c2 < m; ++c2) R[r][c2] -= f * R[rank][c2];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<std::array<Scalar, 4>> basis;
    for (int col = 0; col < m; ++col) {
        if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end()) continue;
        std::array<Scalar, 4> v{0, 0, 0, 0};
        v[col] = 1;
        for (int r = 0; r < rank; ++r)
            v[pivot_col[r]] = -R[r][col] / R[r][pivot_col[r]];
        basis.push_back(v);
    }
    return basis;
}

/// Do the direction cones of two cells at a shared vertex meet beyond zero?
/// Cone generators are the edge directions of each cell at the vertex.
inline bool cones_share_ray(const std::vector<Point>& gen1, const std::vector<Point>& gen2,
                            Scalar scale) {
    const Scalar tol = 1e-9 * std::max<Scalar>(1.0, scale);
    const int m = static_cast<int>(gen1.size() + gen2.size());
    const std::size_t n = gen1[0].size();
    std::vector<std::array<Scalar, 4>> rows(n, {0, 0, 0, 0});
    for (std::size_t r = 0; r < n; ++r) {
        int c = 0;
        for (const Point& g : gen1) rows[r][c++] = g[r];
        for (const Point& g : gen2) rows[r][c++] = -g[r];
    }
    auto basis = null_space(rows, m, tol);
    if (basis.empty()) return false;
    if (basis.size() == 1) {
        // a shared ray exists iff the kernel vector (or its negation) is
        // componentwise nonnegative and nonzero
        for (int sign : {1, -1}) {
            bool nonneg = true, nonzero = false;
            for (int c = 0; c < m; ++c) {
                const Scalar x = sign * basis[0][c];
                if (x < -1e-9) nonneg = false;
                if (x > 1e-9) nonzero = true;
            }
            if (nonneg && nonzero) return true;
        }
        return false;
    }
    // kernel dimension >= 2 (e.g. coplanar cones): fall back to a dense
    // angular sweep inside cone 1, testing membership in cone 2
    for (int i = 0; i <= 64; ++i) {
        const Scalar t = static_cast<Scalar>(i) / 64;
        Point u(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t g = 0; g < gen1.size(); ++g)
                u[r] += (gen1.size() == 1 ? 1.0 : (g == 0 ? 1 - t : t)) * gen1[g][r];
        }
        // membership in cone 2: nonnegative least squares residual
        if (gen2.size() == 1) {
            if (angle_between(u, gen2[0]) < 1e-7) return true;
        } else {
            const Scalar a11 = dot(gen2[0], gen2[0]), a12 = dot(gen2[0], gen2[1]),
                         a22 = dot(gen2[1], gen2[1]);
            const Scalar b1 = dot(gen2[0], u), b2 = dot(gen2[1], u);
            const Scalar det = a11 * a22 - a12 * a12;
            if (std::abs(det) < tol * tol) continue;
            const Scalar al = (b1 * a22 - b2 * a12) / det, be = (a11 * b2 - a12 * b1) / det;
            if (al < -1e-9 || be < -1e-9) continue;
            Scalar res2 = 0;
            for (std::size_t r = 0; r < n; ++r) {
                const Scalar d = u[r] - al * gen2[0][r] - be * gen2[1][r];
                res2 += d * d;
            }
            if (std::sqrt(res2) <= 1e-7 * norm(u)) return true;
        }
    }
    return false;
}

inline std::vector<Point> cone_generators(const LinearEmbedding& E, const Cell& c, VertexId v) {
    std::vector<Point> gens;
    for (int i = 0; i <= c.dim; ++i)
        if (c.v[i] != v) gens.push_back(sub(E.at(c.v[i]), E.at(v)));
    return gens;
}

inline std::vector<VertexId> shared_vertices(const Cell& a, const Cell& b) {
    std::vector<VertexId> out;
    for (int i = 0; i <= a.dim; ++i)
        for (int j = 0; j <= b.dim; ++j)
            if (a.v[i] == b.v[j]) out.push_back(a.v[i]);
    return out;
}

inline Scalar triangle_inradius(const Point& a, const Point& b, const Point& c) {
    const Scalar la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
    const Scalar s = (la + lb + lc) / 2;
    const Scalar area2 = s * (s - la) * (s - lb) * (s - lc);
    return std::sqrt(std::max<Scalar>(0, area2)) / s;
}

inline Point triangle_incenter(const Point& a, const Point& b, const Point& c) {
    const Scalar la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
    const Scalar w = la + lb + lc;
    Point r(a.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (la * a[i] + lb * b[i] + lc * c[i]) / w;
    return r;
}

inline HalfPlane triangle_half_plane(const LinearEmbedding& E, const Triangle& t, const Edge& e) {
    // half-plane of triangle t hinged on edge e
    VertexId apex = -1;
    for (VertexId v : t)
        if (v != e[0] && v != e[1]) apex = v;
    HalfPlane h;
    h.base = E.at(e[0]);
    h.axis = sub(E.at(e[1]), E.at(e[0]));
    // inward = apex minus its projection on the axis line
    const Point ap = sub(E.at(apex), E.at(e[0]));
    const Scalar c = dot(ap, h.axis) / dot(h.axis, h.axis);
    h.inward = ap;
    for (std::size_t i = 0; i < h.inward.size(); ++i) h.inward[i] -= c * h.axis[i];
    return h;
}

}  // namespace detail

/// Checks the linear-embedding conditions: vertex injectivity, triangle
/// non-collinearity, pairwise cell intersections equal to shared faces,
/// straight degree-2 vertices, and coplanar degree-2 edges.
inline ValidationReport validate_embedding(const LinearEmbedding& E) {
    ValidationReport rep;
    const auto& X = E.complex;

    Scalar scale = 1;
    for (const auto& [v, p] : E.theta) scale = std::max(scale, norm(p));
    const Scalar tol = comparison_slack(scale);

    // 1: injective on vertices
    {
        std::vector<VertexId> vs(X.vertices().begin(), X.vertices().end());
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (distance(E.at(vs[i]), E.at(vs[j])) <= tol)
                    rep.add("embedding.1",
                            "vertices " + std::to_string(vs[i]) + " and " +
                                std::to_string(vs[j]) + " coincide");
    }

    // 3: triangle vertices not collinear
    for (const Triangle& t : X.triangles()) {
        const Point ab = sub(E.at(t[1]), E.at(t[0])), ac = sub(E.at(t[2]), E.at(t[0]));
        const Scalar ang = angle_between(ab, ac);
        if (std::min(ang, kPi - ang) < 1e-9)
            rep.add("embedding.3", "triangle " + cell_name(Cell::triangle(t)) + " is collinear");
    }

    // 4: pairwise intersections equal the shared face
    {
        auto cells = X.all_cells();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                const Cell &a = cells[i], &b = cells[j];
                if (a.subset_of(b) || b.subset_of(a)) continue;
                auto shared = detail::shared_vertices(a, b);
                if (shared.empty()) {
                    const Scalar d = detail::distance_cells(E, a, b);
                    if (d <= tol)
                        rep.add("embedding.4",
                                cell_name(a) + " and " + cell_name(b) +
                                    " intersect but share no face",
                                d, tol);
                } else if (shared.size() == 1) {
                    auto g1 = detail::cone_generators(E, a, shared[0]);
                    auto g2 = detail::cone_generators(E, b, shared[0]);
                    if (!g1.empty() && !g2.empty() &&
                        detail::cones_share_ray(g1, g2, scale))
                        rep.add("embedding.4",
                                cell_name(a) + " and " + cell_name(b) +
                                    " overlap beyond shared vertex " +
                                    std::to_string(shared[0]));
                } else if (shared.size() == 2 && a.dim == 2 && b.dim == 2) {
                    const Edge e = make_edge(shared[0], shared[1]);
                    const auto h1 = detail::triangle_half_plane(E, {a.v[0], a.v[1], a.v[2]}, e);
                    const auto h2 = detail::triangle_half_plane(E, {b.v[0], b.v[1], b.v[2]}, e);
                    if (dihedral_angle(h1, h2) < 1e-7)
                        rep.add("embedding.4",
                                cell_name(a) + " and " + cell_name(b) +
                                    " overlap beyond shared edge");
                }
            }
        }
    }

    // 5: degree-2 vertices are not straight
    for (VertexId v : X.vertices()) {
        auto ev = X.edges_at(v);
        if (ev.size() != 2 || !X.triangles_at(v).empty()) continue;
        const VertexId u1 = ev[0][0] == v ? ev[0][1] : ev[0][0];
        const VertexId u2 = ev[1][0] == v ? ev[1][1] : ev[1][0];
        const Scalar ang = angle_between(sub(E.at(u1), E.at(v)), sub(E.at(u2), E.at(v)));
        if (kPi - ang < 1e-9)
            rep.add("embedding.5", "degree-2 vertex " + std::to_string(v) + " is straight", ang,
                    kPi);
    }

    // 6: degree-2 edges are not coplanar
    for (const Edge& e : X.edges()) {
        auto ts = X.triangles_on(e);
        if (ts.size() != 2) continue;
        const auto h1 = detail::triangle_half_plane(E, ts[0], e);
        const auto h2 = detail::triangle_half_plane(E, ts[1], e);
        const Scalar d = dihedral_angle(h1, h2);
        if (kPi - d < 1e-9 || d < 1e-9)
            rep.add("embedding.6",
                    "triangles on edge " + cell_name(Cell::edge(e)) + " are coplanar", d, kPi);
    }

    return rep;
}

/// Checks the thirteen separation and angle conditions an embedding must meet
/// for recovery at parameters (epsilon, R).
inline ValidationReport validate_assumptions(const LinearEmbedding& E, const Thresholds& t) {
    ValidationReport rep;
    const auto& X = E.complex;
    const Scalar sep = 6 * (t.R + t.epsilon);
    const Scalar tol = t.slack;

    auto far_enough = [&](const Cell& a, const Cell& b, const char* cond) {
        const Scalar d = detail::distance_cells(E, a, b);
        if (!(d > sep + tol))
            rep.add(cond, cell_name(a) + " vs " + cell_name(b) + " too close", d, sep);
    };

    std::vector<VertexId> vs(X.vertices().begin(), X.vertices().end());

    // 1: vertex-vertex separation
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            far_enough(Cell::vertex(vs[i]), Cell::vertex(vs[j]), "assumption.1");

    // 2: vertex vs non-incident edge
    for (VertexId v : vs)
        for (const Edge& e : X.edges())
            if (v != e[0] && v != e[1]) far_enough(Cell::vertex(v), Cell::edge(e), "assumption.2");

    // 3: vertex vs non-incident triangle
    for (VertexId v : vs)
        for (const Triangle& tr : X.triangles())
            if (v != tr[0] && v != tr[1] && v != tr[2])
                far_enough(Cell::vertex(v), Cell::triangle(tr), "assumption.3");

    // 4: edge vs vertex-disjoint triangle
    for (const Edge& e : X.edges())
        for (const Triangle& tr : X.triangles())
            if (detail::shared_vertices(Cell::edge(e), Cell::triangle(tr)).empty())
                far_enough(Cell::edge(e), Cell::triangle(tr), "assumption.4");

    // 5: triangle interior angles
    for (const Triangle& tr : X.triangles()) {
        for (int i = 0; i < 3; ++i) {
            const VertexId v = tr[i], a = tr[(i + 1) % 3], b = tr[(i + 2) % 3];
            const Scalar ang = angle_between(sub(E.at(a), E.at(v)), sub(E.at(b), E.at(v)));
            if (!(ang >= kPi / 6 - tol))
                rep.add("assumption.5",
                        "triangle " + cell_name(Cell::triangle(tr)) + " angle at " +
                            std::to_string(v) + " below pi/6",
                        ang, kPi / 6);
        }
    }

    // 6: disjoint edges separation
    {
        std::vector<Edge> es(X.edges().begin(), X.edges().end());
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j)
                if (detail::shared_vertices(Cell::edge(es[i]), Cell::edge(es[j])).empty())
                    far_enough(Cell::edge(es[i]), Cell::edge(es[j]), "assumption.6");
    }

    // 7: vertex-disjoint triangles separation
    {
        std::vector<Triangle> ts(X.triangles().begin(), X.triangles().end());
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j)
                if (detail::shared_vertices(Cell::triangle(ts[i]), Cell::triangle(ts[j])).empty())
                    far_enough(Cell::triangle(ts[i]), Cell::triangle(ts[j]), "assumption.7");
    }

    // 8: edge pairs at a common vertex
    for (VertexId v : vs) {
        auto ev = X.edges_at(v);
        for (std::size_t i = 0; i < ev.size(); ++i)
            for (std::size_t j = i + 1; j < ev.size(); ++j) {
                const VertexId a = ev[i][0] == v ? ev[i][1] : ev[i][0];
                const VertexId b = ev[j][0] == v ? ev[j][1] : ev[j][0];
                const Scalar ang = angle_between(sub(E.at(a), E.at(v)), sub(E.at(b), E.at(v)));
                if (!(ang >= t.psi1 - tol))
                    rep.add("assumption.8",
                            "edges at vertex " + std::to_string(v) + " below psi1", ang, t.psi1);
            }
    }

    // 9: degree-2 vertex angle cap
    for (VertexId v : vs) {
        auto ev = X.edges_at(v);
        if (ev.size() != 2 || !X.triangles_at(v).empty()) continue;
        const VertexId a = ev[0][0] == v ? ev[0][1] : ev[0][0];
        const VertexId b = ev[1][0] == v ? ev[1][1] : ev[1][0];
        if (X.has_edge(a, b) && X.triangles().count(make_triangle(v, a, b))) continue;
        const Scalar ang = angle_between(sub(E.at(a), E.at(v)), sub(E.at(b), E.at(v)));
        if (!(ang <= t.psi2 + tol))
            rep.add("assumption.9", "degree-2 vertex " + std::to_string(v) + " above psi2", ang,
                    t.psi2);
    }

    // 10/11: dihedral angles between triangles sharing an edge
    for (const Edge& e : X.edges()) {
        auto ts = X.triangles_on(e);
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                const auto h1 = detail::triangle_half_plane(E, ts[i], e);
                const auto h2 = detail::triangle_half_plane(E, ts[j], e);
                const Scalar d = dihedral_angle(h1, h2);
                if (!(d >= t.psi1 - tol))
                    rep.add("assumption.10",
                            "dihedral on edge " + cell_name(Cell::edge(e)) + " below psi1", d,
                            t.psi1);
                if (ts.size() == 2 && !(d <= t.psi2 + tol))
                    rep.add("assumption.11",
                            "degree-2 dihedral on edge " + cell_name(Cell::edge(e)) +
                                " above psi2",
                            d, t.psi2);
            }
    }

    // 12: edge vs triangle fan at a shared vertex, and triangle inradius
    for (const Triangle& tr : X.triangles()) {
        const Scalar r = detail::triangle_inradius(E.at(tr[0]), E.at(tr[1]), E.at(tr[2]));
        if (!(r >= 2 * t.R + 3 * t.epsilon - tol))
            rep.add("assumption.12",
                    "triangle " + cell_name(Cell::triangle(tr)) + " inradius too small", r,
                    2 * t.R + 3 * t.epsilon);
    }
    for (VertexId v : vs) {
        auto ev = X.edges_at(v);
        auto tv = X.triangles_at(v);
        for (const Edge& e : ev) {
            if (!X.triangles_on(e).empty()) continue;  // only free edges vs triangle rays
            const VertexId u = e[0] == v ? e[1] : e[0];
            const Point dir = sub(E.at(u), E.at(v));
            for (const Triangle& tr : tv) {
                for (VertexId w : tr) {
                    if (w == v) continue;
                    const Scalar ang = angle_between(dir, sub(E.at(w), E.at(v)));
                    if (!(ang >= t.psi1 - tol))
                        rep.add("assumption.12",
                                "edge " + cell_name(Cell::edge(e)) + " vs triangle ray at " +
                                    std::to_string(v) + " below psi1",
                                ang, t.psi1);
                }
            }
        }
    }

    // 13: cone vertices (link is a single circle) have a ray-angle cap
    for (VertexId v : vs) {
        auto tv = X.triangles_at(v);
        if (tv.empty()) continue;
        // link graph of v: neighbours as nodes, triangle-opposite edges as arcs
        std::set<VertexId> lv;
        std::set<Edge> le;
        for (const Edge& e : X.edges_at(v)) lv.insert(e[0] == v ? e[1] : e[0]);
        for (const Triangle& tr : tv) {
            std::vector<VertexId> rest;
            for (VertexId w : tr)
                if (w != v) rest.push_back(w);
            le.insert(make_edge(rest[0], rest[1]));
        }
        // connected components and cycle rank of the link
        std::map<VertexId, VertexId> parent;
        for (VertexId w : lv) parent[w] = w;
        std::function<VertexId(VertexId)> find = [&](VertexId x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int merges = 0;
        for (const Edge& e : le) {
            VertexId a = find(e[0]), b = find(e[1]);
            if (a != b) { parent[a] = b; ++merges; }
        }
        std::set<VertexId> roots;
        for (VertexId w : lv) roots.insert(find(w));
        const int comps = static_cast<int>(roots.size());
        const int cycle_rank = static_cast<int>(le.size()) - merges;
        if (comps == 1 && cycle_rank == 1) {
            std::vector<Point> rays;
            for (VertexId w : lv) rays.push_back(sub(E.at(w), E.at(v)));
            for (std::size_t i = 0; i < rays.size(); ++i)
                for (std::size_t j = i + 1; j < rays.size(); ++j) {
                    const Scalar ang = angle_between(rays[i], rays[j]);
                    if (!(ang <= t.psi3 + tol))
                        rep.add("assumption.13",
                                "cone vertex " + std::to_string(v) + " ray angle above psi3", ang,
                                t.psi3);
                }
        }
    }

    return rep;
}

}  // namespace strata
