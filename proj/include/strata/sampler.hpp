#pragma once

#include <random>

#include "strata/validate.hpp"

namespace strata {

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct SamplingSpec {
    Scalar epsilon = 1;
    Scalar density_step = 0.5;     // surface grid pitch, <= epsilon/2
    Scalar noise_amplitude = 0;    // < epsilon
    std::uint64_t seed = 0;
    bool verify_hausdorff = true;  // dense-grid post check

    void validate() const {
        if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
        if (!(density_step > 0 && density_step <= epsilon / 2))
            throw std::invalid_argument("density_step must lie in (0, epsilon/2]");
        if (!(noise_amplitude >= 0 && noise_amplitude < epsilon))
            throw std::invalid_argument("noise_amplitude must lie in [0, epsilon)");
        if (!(density_step + noise_amplitude <= epsilon))
            throw std::invalid_argument("density_step + noise_amplitude must not exceed epsilon");
    }
};

namespace detail {

/// Deterministic noise: uniform direction times amplitude * U^{1/n}.
inline Point noise_vector(std::mt19937_64& rng, std::size_t dim, Scalar amplitude) {
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
    Point v(dim);
    Scalar n2 = 0;
    do {
        n2 = 0;
        for (auto& x : v) {
            x = gauss(rng);
            n2 += x * x;
        }
    } while (n2 == 0);
    const Scalar r = amplitude * std::pow(unif(rng), 1.0 / static_cast<Scalar>(dim));
    const Scalar f = r / std::sqrt(n2);
    for (auto& x : v) x *= f;
    return v;
}

inline void grid_points_of_cell(const LinearEmbedding& E, const Cell& c, Scalar step,
                                std::vector<Point>& out) {
    if (c.dim == 0) {
        out.push_back(E.at(c.v[0]));
        return;
    }
    if (c.dim == 1) {
        const Point &a = E.at(c.v[0]), &b = E.at(c.v[1]);
        const Scalar len = distance(a, b);
        const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int i = 0; i <= n; ++i)
            out.push_back(axpy(a, static_cast<Scalar>(i) / n, sub(b, a)));
        return;
    }
    const Point &a = E.at(c.v[0]), &b = E.at(c.v[1]), &cc = E.at(c.v[2]);
    const Scalar side = std::max({distance(a, b), distance(a, cc), distance(b, cc)});
    const int n = std::max(1, static_cast<int>(std::ceil(side / step)));
    const Point e1 = sub(b, a), e2 = sub(cc, a);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j + i <= n; ++j) {
            Point p(a.begin(), a.end());
            for (std::size_t k = 0; k < p.size(); ++k)
                p[k] += (e1[k] * i + e2[k] * j) / n;
            out.push_back(std::move(p));
        }
}

}  // namespace detail

/// Deterministic eps-sample of an embedded complex: per-cell grids of pitch
/// at most density_step (cells in id order, grid rows lexicographic), each
/// point perturbed inside a noise ball.  Exact duplicates are dropped.
inline PointCloud sample(const LinearEmbedding& E, const SamplingSpec& spec) {
    spec.validate();
    if (E.theta.empty()) throw std::invalid_argument("embedding has no vertices");
    const std::size_t dim = E.dim();
    std::mt19937_64 rng(spec.seed);

    std::vector<Point> grid;
    for (const Cell& c : E.complex.all_cells())
        detail::grid_points_of_cell(E, c, spec.density_step, grid);

    PointCloud cloud(dim);
    std::set<std::vector<Scalar>> seen;
    for (const Point& g : grid) {
        if (!seen.insert(g).second) continue;  // duplicate grid node (shared faces)
        if (spec.noise_amplitude > 0) {
            const Point n = detail::noise_vector(rng, dim, spec.noise_amplitude);
            cloud.push_back(add(g, n));
        } else {
            cloud.push_back(g);
        }
    }

    if (spec.verify_hausdorff) {
        // direction 1: every sample near the complex
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (E.distance_to_complex(cloud[i]) > spec.epsilon + comparison_slack(spec.epsilon))
                throw internal_error("sample escaped the epsilon tube");
        }
        // direction 2: a denser reference grid is covered by the sample
        std::vector<Point> refgrid;
        for (const Cell& c : E.complex.all_cells())
            detail::grid_points_of_cell(E, c, spec.density_step / 2, refgrid);
        SpatialGrid lookup(cloud, std::max<Scalar>(spec.epsilon, 1e-9));
        for (const Point& g : refgrid) {
            bool covered = false;
            lookup.for_each_in_ball(g, spec.epsilon + comparison_slack(spec.epsilon),
                                    [&](std::uint32_t) { covered = true; });
            if (!covered) throw internal_error("epsilon cover violated by sampling grid");
        }
    }
    return cloud;
}

// --- fixture catalog ------------------------------------------------------

namespace fixtures {

struct Builder {
    Thresholds t;
    Scalar sep;      // hard separation bound 6(R+eps)
    Scalar margin;   // distance margin factor
    Scalar inr;      // triangle inradius
    Scalar pendant;  // pendant edge length
    Scalar edge_len; // isolated/path/star edge length

    explicit Builder(const Thresholds& thr)
        : t(thr),
          sep(6 * (thr.R + thr.epsilon)),
          margin(1.1),
          inr(1.1 * (2 * thr.R + 3 * thr.epsilon)),
          pendant(1.3 * 6 * (thr.R + thr.epsilon)),
          edge_len(1.3 * 6 * (thr.R + thr.epsilon)) {}

    static Point p3(Scalar x, Scalar y, Scalar z) { return Point{x, y, z}; }

    /// Equilateral triangle in the z=0 plane, centroid at origin, one vertex
    /// on the +y axis.  Vertices get ids base, base+1, base+2.
    void central_triangle(LinearEmbedding& E, VertexId base) const {
        const Scalar cr = 2 * inr;  // circumradius
        E.complex.add_vertex(base);
        E.complex.add_vertex(base + 1);
        E.complex.add_vertex(base + 2);
        E.theta[base] = p3(0, cr, 0);
        E.theta[base + 1] = p3(-cr * std::sqrt(3.0) / 2, -cr / 2, 0);
        E.theta[base + 2] = p3(cr * std::sqrt(3.0) / 2, -cr / 2, 0);
        E.complex.add_triangle(base, base + 1, base + 2);
    }

    /// Two equilateral triangles sharing the edge (u, v) on the x axis, the
    /// first apex in-plane at +y, the second rotated out of plane so that the
    /// dihedral angle equals `dihedral`.
    void shared_edge_pair(LinearEmbedding& E, Scalar dihedral) const {
        const Scalar h = std::sqrt(3.0) * inr;  // half edge length
        E.complex.add_vertex(0);
        E.complex.add_vertex(1);
        E.theta[0] = p3(-h, 0, 0);
        E.theta[1] = p3(h, 0, 0);
        E.complex.add_vertex(2);
        E.theta[2] = p3(0, 3 * inr, 0);
        E.complex.add_triangle(0, 1, 2);
        E.complex.add_vertex(3);
        E.theta[3] = p3(0, 3 * inr * std::cos(dihedral), 3 * inr * std::sin(dihedral));
        E.complex.add_triangle(0, 1, 3);
    }

    /// Pendant edge from vertex v along unit direction dir.
    void pendant_edge(LinearEmbedding& E, VertexId v, const Point& dir, VertexId nid) const {
        E.complex.add_vertex(nid);
        E.theta[nid] = axpy(E.at(v), pendant / norm(dir), dir);
        E.complex.add_edge(v, nid);
    }

    /// Radially-outward unit direction from the centroid of the given cells.
    Point radial(const LinearEmbedding& E, VertexId v) const {
        Point c(E.dim(), 0.0);
        for (const auto& [id, p] : E.theta)
            for (std::size_t k = 0; k < c.size(); ++k) c[k] += p[k];
        for (auto& x : c) x /= static_cast<Scalar>(E.theta.size());
        Point d = sub(E.at(v), c);
        const Scalar n = norm(d);
        if (n == 0) throw internal_error("radial direction undefined");
        for (auto& x : d) x /= n;
        return d;
    }

    /// Wing triangle folded out of plane over edge (a, b) of the central
    /// triangle, apex opposite to vertex c.  `dihedral` is the fold angle.
    void wing(LinearEmbedding& E, VertexId a, VertexId b, VertexId c, VertexId nid,
              Scalar dihedral) const {
        const Point &A = E.at(a), &B = E.at(b), &C = E.at(c);
        Point mid = scale(add(A, B), 0.5);
        // in-plane outward normal: away from C, perpendicular to AB
        Point ab = sub(B, A);
        Point mc = sub(C, mid);
        const Scalar t0 = dot(mc, ab) / dot(ab, ab);
        Point inward = sub(mc, scale(ab, t0));
        Point outward = scale(inward, -1.0 / norm(inward));
        const Point up = p3(0, 0, 1);
        // apex = mid + h*(outward*cos phi + up*sin phi), fold phi = pi - dihedral
        const Scalar phi = kPi - dihedral;
        const Scalar h = 3 * inr;  // apex height for an equilateral wing
        Point apex = mid;
        for (std::size_t k = 0; k < apex.size(); ++k)
            apex[k] += h * (outward[k] * std::cos(phi) + up[k] * std::sin(phi));
        E.complex.add_vertex(nid);
        E.theta[nid] = apex;
        E.complex.add_triangle(a, b, nid);
    }
};

}  // namespace fixtures

inline std::vector<std::string> fixture_names() {
    return {
        "isolated-vertex",
        "isolated-edge",
        "path-2",
        "star-3",
        "single-triangle",
        "tri-pendant-vertex",
        "tri-pendant-edge-dir",
        "tri-pendant-2",
        "tri-pendant-3",
        "two-tri-share-vertex",
        "two-tri-share-2-vertices",
        "two-tri-share-edge",
        "book-3",
        "se-pendant-v",
        "se-pendant-both",
        "se-pendant-far",
        "se-pendant-v-far",
        "se-pendant-all",
        "fan-2",
        "fan-2-pendant-2",
        "fan-2-pendant-3",
        "three-wings",
    };
}

/// Parametric catalog of embedded complexes scaled so that the assumption
/// validator passes at the given thresholds.
inline LinearEmbedding fixture(const std::string& name, const Thresholds& t) {
    using fixtures::Builder;
    Builder b(t);
    LinearEmbedding E;
    const Scalar wing_dihedral = 105.0 * kPi / 180.0;

    auto shared_edge_base = [&](Scalar dihedral) { b.shared_edge_pair(E, dihedral); };

    if (name == "isolated-vertex") {
        E.complex.add_vertex(0);
        E.theta[0] = Builder::p3(0, 0, 0);
    } else if (name == "isolated-edge") {
        E.complex.add_vertex(0);
        E.complex.add_vertex(1);
        E.theta[0] = Builder::p3(0, 0, 0);
        E.theta[1] = Builder::p3(b.edge_len, 0, 0);
        E.complex.add_edge(0, 1);
    } else if (name == "path-2") {
        E.complex.add_vertex(0);
        E.complex.add_vertex(1);
        E.complex.add_vertex(2);
        E.theta[0] = Builder::p3(0, 0, 0);
        E.theta[1] = Builder::p3(b.edge_len, 0, 0);
        E.theta[2] = Builder::p3(0, b.edge_len, 0);
        E.complex.add_edge(0, 1);
        E.complex.add_edge(0, 2);
    } else if (name == "star-3") {
        E.complex.add_vertex(0);
        E.theta[0] = Builder::p3(0, 0, 0);
        for (int k = 0; k < 3; ++k) {
            const Scalar a = kPi / 2 + 2 * kPi * k / 3;
            E.complex.add_vertex(k + 1);
            E.theta[k + 1] = Builder::p3(b.edge_len * std::cos(a), b.edge_len * std::sin(a), 0);
            E.complex.add_edge(0, k + 1);
        }
    } else if (name == "single-triangle") {
        b.central_triangle(E, 0);
    } else if (name == "tri-pendant-vertex") {
        b.central_triangle(E, 0);
        b.pendant_edge(E, 0, b.radial(E, 0), 10);
    } else if (name == "tri-pendant-edge-dir") {
        b.central_triangle(E, 0);
        // pendant continuing the direction of edge 1->0 beyond vertex 0
        b.pendant_edge(E, 0, sub(E.at(0), E.at(1)), 10);
    } else if (name == "tri-pendant-2") {
        b.central_triangle(E, 0);
        b.pendant_edge(E, 0, b.radial(E, 0), 10);
        b.pendant_edge(E, 1, b.radial(E, 1), 11);
    } else if (name == "tri-pendant-3") {
        b.central_triangle(E, 0);
        b.pendant_edge(E, 0, b.radial(E, 0), 10);
        b.pendant_edge(E, 1, b.radial(E, 1), 11);
        b.pendant_edge(E, 2, b.radial(E, 2), 12);
    } else if (name == "two-tri-share-vertex") {
        // two equilateral triangles joined at one vertex, opposite sectors
        const Scalar s = 2 * std::sqrt(3.0) * b.inr;
        E.complex.add_vertex(0);
        E.theta[0] = Builder::p3(0, 0, 0);
        E.complex.add_vertex(1);
        E.complex.add_vertex(2);
        E.theta[1] = Builder::p3(s * std::cos(-kPi / 6), s * std::sin(-kPi / 6), 0);
        E.theta[2] = Builder::p3(s * std::cos(kPi / 6), s * std::sin(kPi / 6), 0);
        E.complex.add_triangle(0, 1, 2);
        E.complex.add_vertex(3);
        E.complex.add_vertex(4);
        E.theta[3] = Builder::p3(-s * std::cos(-kPi / 6), -s * std::sin(-kPi / 6), 0);
        E.theta[4] = Builder::p3(-s * std::cos(kPi / 6), -s * std::sin(kPi / 6), 0);
        E.complex.add_triangle(0, 3, 4);
    } else if (name == "two-tri-share-2-vertices") {
        // a central triangle touching another triangle at one vertex and a
        // pendant edge at a second vertex
        b.central_triangle(E, 0);
        const Scalar s = 2 * std::sqrt(3.0) * b.inr;
        const Point d = b.radial(E, 0);  // +y
        // corner triangle opening around +y with apex angle 60 degrees
        auto rot = [&](Scalar deg) {
            const Scalar a = deg * kPi / 180.0;
            return Builder::p3(d[0] * std::cos(a) - d[1] * std::sin(a),
                               d[0] * std::sin(a) + d[1] * std::cos(a), 0);
        };
        E.complex.add_vertex(10);
        E.complex.add_vertex(11);
        E.theta[10] = axpy(E.at(0), s, rot(30));
        E.theta[11] = axpy(E.at(0), s, rot(-30));
        E.complex.add_triangle(0, 10, 11);
        b.pendant_edge(E, 1, b.radial(E, 1), 12);
    } else if (name == "two-tri-share-edge") {
        shared_edge_base(kPi / 2);
    } else if (name == "book-3") {
        const Scalar h = std::sqrt(3.0) * b.inr;
        E.complex.add_vertex(0);
        E.complex.add_vertex(1);
        E.theta[0] = Builder::p3(-h, 0, 0);
        E.theta[1] = Builder::p3(h, 0, 0);
        for (int k = 0; k < 3; ++k) {
            const Scalar a = kPi / 2 + 2 * kPi * k / 3;
            E.complex.add_vertex(2 + k);
            E.theta[2 + k] = Builder::p3(0, 3 * b.inr * std::cos(a), 3 * b.inr * std::sin(a));
            E.complex.add_triangle(0, 1, 2 + k);
        }
    } else if (name == "se-pendant-v") {
        shared_edge_base(kPi / 2);
        b.pendant_edge(E, 1, Builder::p3(1, 0, 0), 10);
    } else if (name == "se-pendant-both") {
        shared_edge_base(kPi / 2);
        b.pendant_edge(E, 0, Builder::p3(-1, 0, 0), 10);
        b.pendant_edge(E, 1, Builder::p3(1, 0, 0), 11);
    } else if (name == "se-pendant-far") {
        shared_edge_base(kPi / 2);
        b.pendant_edge(E, 2, Builder::p3(0, 1, 0), 10);
    } else if (name == "se-pendant-v-far") {
        shared_edge_base(kPi / 2);
        b.pendant_edge(E, 1, Builder::p3(1, 0, 0), 10);
        b.pendant_edge(E, 2, Builder::p3(0, 1, 0), 11);
    } else if (name == "se-pendant-all") {
        shared_edge_base(kPi / 2);
        b.pendant_edge(E, 0, Builder::p3(-1, 0, 0), 10);
        b.pendant_edge(E, 1, Builder::p3(1, 0, 0), 11);
        b.pendant_edge(E, 2, Builder::p3(0, 1, 0), 12);
    } else if (name == "fan-2") {
        b.central_triangle(E, 0);
        b.wing(E, 0, 1, 2, 10, wing_dihedral);
        b.wing(E, 1, 2, 0, 11, wing_dihedral);
    } else if (name == "fan-2-pendant-2") {
        b.central_triangle(E, 0);
        b.wing(E, 0, 1, 2, 10, wing_dihedral);
        b.wing(E, 1, 2, 0, 11, wing_dihedral);
        b.pendant_edge(E, 0, b.radial(E, 0), 12);
        b.pendant_edge(E, 1, b.radial(E, 1), 13);
    } else if (name == "fan-2-pendant-3") {
        b.central_triangle(E, 0);
        b.wing(E, 0, 1, 2, 10, wing_dihedral);
        b.wing(E, 1, 2, 0, 11, wing_dihedral);
        b.pendant_edge(E, 0, b.radial(E, 0), 12);
        b.pendant_edge(E, 1, b.radial(E, 1), 13);
        b.pendant_edge(E, 2, b.radial(E, 2), 14);
    } else if (name == "three-wings") {
        b.central_triangle(E, 0);
        b.wing(E, 0, 1, 2, 10, wing_dihedral);
        b.wing(E, 1, 2, 0, 11, wing_dihedral);
        b.wing(E, 0, 2, 1, 12, wing_dihedral);
    } else {
        throw std::invalid_argument("unknown fixture: " + name);
    }
    return E;
}

}  // namespace strata
