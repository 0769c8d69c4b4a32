#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

using Scalar = double;
using Point = std::vector<Scalar>;

inline constexpr Scalar kPi = 3.14159265358979323846;

/// Absolute comparison slack used for all closed shell / threshold tests.
/// Scaled so that set-inclusion decisions are stable at fixture scale.
inline Scalar comparison_slack(Scalar scale) {
    return 1e-9 * std::max<Scalar>(1.0, scale);
}

struct dimension_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require_same_dim(std::span<const Scalar> p, std::span<const Scalar> q) {
    if (p.size() != q.size())
        throw dimension_mismatch("points have different ambient dimensions");
}

inline Scalar squared_distance(std::span<const Scalar> p, std::span<const Scalar> q) {
    require_same_dim(p, q);
    Scalar s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Scalar d = p[i] - q[i];
        s += d * d;
    }
    return s;
}

inline Scalar distance(std::span<const Scalar> p, std::span<const Scalar> q) {
    return std::sqrt(squared_distance(p, q));
}

inline Scalar norm(std::span<const Scalar> v) {
    Scalar s = 0;
    for (Scalar x : v) s += x * x;
    return std::sqrt(s);
}

inline Scalar dot(std::span<const Scalar> u, std::span<const Scalar> v) {
    require_same_dim(u, v);
    Scalar s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline Point sub(std::span<const Scalar> a, std::span<const Scalar> b) {
    require_same_dim(a, b);
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point add(std::span<const Scalar> a, std::span<const Scalar> b) {
    require_same_dim(a, b);
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point scale(std::span<const Scalar> a, Scalar t) {
    Point r(a.begin(), a.end());
    for (Scalar& x : r) x *= t;
    return r;
}

inline Point axpy(std::span<const Scalar> a, Scalar t, std::span<const Scalar> d) {
    require_same_dim(a, d);
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * d[i];
    return r;
}

/// Angle between two direction vectors in [0, pi].  Uses atan2 of the
/// rejection norm against the dot product, which stays accurate near 0 and pi.
inline Scalar angle_between(std::span<const Scalar> u, std::span<const Scalar> v) {
    require_same_dim(u, v);
    const Scalar nu = norm(u), nv = norm(v);
    if (nu == 0 || nv == 0) throw std::invalid_argument("angle of zero vector");
    const Scalar d = dot(u, v);
    // rejection of v from u: v - (d/nu^2) u
    Scalar rej2 = 0;
    const Scalar c = d / (nu * nu);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Scalar r = v[i] - c * u[i];
        rej2 += r * r;
    }
    return std::atan2(std::sqrt(rej2) * nu, d);
}

/// Closest point on the segment [a,b] to p; returns the parameter t in [0,1].
inline Scalar closest_point_on_segment(std::span<const Scalar> p, std::span<const Scalar> a,
                                       std::span<const Scalar> b) {
    const Point ab = sub(b, a);
    const Scalar denom = dot(ab, ab);
    if (denom == 0) return 0.0;
    const Point ap = sub(p, a);
    Scalar t = dot(ap, ab) / denom;
    return std::clamp<Scalar>(t, 0.0, 1.0);
}

inline Scalar distance_point_segment(std::span<const Scalar> p, std::span<const Scalar> a,
                                     std::span<const Scalar> b) {
    const Scalar t = closest_point_on_segment(p, a, b);
    const Point c = axpy(a, t, sub(b, a));
    return distance(p, c);
}

/// Closest point on triangle (a,b,c) to p, by barycentric region
/// classification over the seven Voronoi regions of the triangle.
/// Dimension independent: only dot products of edge vectors are used.
inline Point closest_point_on_triangle(std::span<const Scalar> p, std::span<const Scalar> a,
                                       std::span<const Scalar> b, std::span<const Scalar> c) {
    const Point ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
    const Scalar d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return Point(a.begin(), a.end());  // vertex a

    const Point bp = sub(p, b);
    const Scalar d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return Point(b.begin(), b.end());  // vertex b

    const Scalar vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {  // edge ab
        const Scalar v = d1 / (d1 - d3);
        return axpy(a, v, ab);
    }

    const Point cp = sub(p, c);
    const Scalar d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return Point(c.begin(), c.end());  // vertex c

    const Scalar vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {  // edge ac
        const Scalar w = d2 / (d2 - d6);
        return axpy(a, w, ac);
    }

    const Scalar va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {  // edge bc
        const Scalar w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return axpy(b, w, sub(c, b));
    }

    const Scalar denom = 1.0 / (va + vb + vc);  // interior
    const Scalar v = vb * denom, w = vc * denom;
    Point r(a.begin(), a.end());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += ab[i] * v + ac[i] * w;
    return r;
}

inline Scalar distance_point_triangle(std::span<const Scalar> p, std::span<const Scalar> a,
                                      std::span<const Scalar> b, std::span<const Scalar> c) {
    return distance(p, closest_point_on_triangle(p, a, b, c));
}

/// Diameter of a finite point set (max pairwise distance, 0 for a singleton).
inline Scalar diameter(const std::vector<Point>& pts) {
    if (pts.empty()) throw std::invalid_argument("diameter of empty set");
    Scalar best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, squared_distance(pts[i], pts[j]));
    return std::sqrt(best);
}

/// Hausdorff distance between two finite nonempty point sets.
inline Scalar hausdorff_distance(const std::vector<Point>& A, const std::vector<Point>& B) {
    if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff of empty set");
    Scalar h = 0;
    auto directed = [&](const std::vector<Point>& X, const std::vector<Point>& Y) {
        Scalar worst = 0;
        for (const Point& x : X) {
            Scalar best = std::numeric_limits<Scalar>::infinity();
            for (const Point& y : Y) best = std::min(best, squared_distance(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    h = std::max(directed(A, B), directed(B, A));
    return std::sqrt(h);
}

/// Radius of the smallest enclosing ball of 1..3 points.  Uses only pairwise
/// squared distances, so it is ambient-dimension independent.  For triples the
/// case split is analytic: obtuse configurations take half the longest side,
/// acute ones the circumradius.
inline Scalar min_enclosing_ball_radius_sq(std::span<const Scalar> a, std::span<const Scalar> b) {
    return squared_distance(a, b) * 0.25;
}

inline Scalar min_enclosing_ball_radius_sq(std::span<const Scalar> a, std::span<const Scalar> b,
                                           std::span<const Scalar> c) {
    const Scalar ab = squared_distance(a, b);
    const Scalar bc = squared_distance(b, c);
    const Scalar ca = squared_distance(c, a);
    const Scalar longest = std::max({ab, bc, ca});
    const Scalar other = ab + bc + ca - longest;  // sum of the two shorter squares
    if (longest >= other)                         // right or obtuse
        return longest * 0.25;
    // acute: squared circumradius = (ab*bc*ca) / (16 * area^2),
    // 16 area^2 = 2(ab*bc + bc*ca + ca*ab) - (ab^2 + bc^2 + ca^2)
    const Scalar sixteen_area2 =
        2 * (ab * bc + bc * ca + ca * ab) - (ab * ab + bc * bc + ca * ca);
    return (ab * bc * ca) / sixteen_area2;
}

inline Scalar min_enclosing_ball_radius(const std::vector<Point>& pts) {
    switch (pts.size()) {
        case 1: return 0;
        case 2: return std::sqrt(min_enclosing_ball_radius_sq(pts[0], pts[1]));
        case 3: return std::sqrt(min_enclosing_ball_radius_sq(pts[0], pts[1], pts[2]));
        default: throw std::invalid_argument("min_enclosing_ball_radius takes 1..3 points");
    }
}

/// Closed spherical shell { q : inner <= |q - center| <= outer }.
struct Shell {
    Point center;
    Scalar inner = 0;
    Scalar outer = 0;

    bool contains(std::span<const Scalar> q, Scalar slack = 0) const {
        const Scalar d = distance(center, q);
        return d >= inner - slack && d <= outer + slack;
    }
};

/// A half-plane in R^n: points base + s*axis + t*inward with t >= 0,
/// axis the boundary line direction and inward perpendicular to it.
struct HalfPlane {
    Point base;
    Point axis;    // unit-ish direction of the boundary line
    Point inward;  // perpendicular component defines the half-plane side
};

/// Dihedral angle between two half-planes with a common boundary line,
/// in [0, pi].  Throws if the boundary lines differ.
inline Scalar dihedral_angle(const HalfPlane& h1, const HalfPlane& h2) {
    const Scalar a1 = norm(h1.axis), a2 = norm(h2.axis);
    if (a1 == 0 || a2 == 0) throw std::invalid_argument("half-plane with zero axis");
    const Scalar tol = 1e-9 * std::max<Scalar>(1.0, norm(h1.base));
    // axes must be parallel
    const Scalar ang = angle_between(h1.axis, h2.axis);
    if (std::min(ang, kPi - ang) > 1e-7)
        throw std::invalid_argument("half-planes do not share a boundary line");
    // base offset must lie along the axis
    const Point off = sub(h2.base, h1.base);
    if (norm(off) > tol) {
        const Scalar c = dot(off, h1.axis) / (a1 * a1);
        Scalar perp2 = 0;
        for (std::size_t i = 0; i < off.size(); ++i) {
            const Scalar r = off[i] - c * h1.axis[i];
            perp2 += r * r;
        }
        if (std::sqrt(perp2) > 1e-7 * std::max<Scalar>(1.0, norm(off)))
            throw std::invalid_argument("half-planes do not share a boundary line");
    }
    auto perp_component = [](const HalfPlane& h) {
        const Scalar c = dot(h.inward, h.axis) / dot(h.axis, h.axis);
        Point w(h.inward.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = h.inward[i] - c * h.axis[i];
        if (norm(w) == 0) throw std::invalid_argument("half-plane inward parallel to axis");
        return w;
    };
    const Point w1 = perp_component(h1), w2 = perp_component(h2);
    return angle_between(w1, w2);
}

// --- threshold functions -------------------------------------------------

inline Scalar checked_acos(Scalar x) {
    if (x > 1.0) {
        if (x > 1.0 + 1e-12) throw std::domain_error("acos argument out of range");
        x = 1.0;
    } else if (x < -1.0) {
        if (x < -1.0 - 1e-12) throw std::domain_error("acos argument out of range");
        x = -1.0;
    }
    return std::acos(x);
}

inline Scalar checked_asin(Scalar x) {
    if (x > 1.0) {
        if (x > 1.0 + 1e-12) throw std::domain_error("asin argument out of range");
        x = 1.0;
    } else if (x < -1.0) {
        if (x < -1.0 - 1e-12) throw std::domain_error("asin argument out of range");
        x = -1.0;
    }
    return std::asin(x);
}

inline void require_psi_domain(Scalar epsilon, Scalar R) {
    if (!(epsilon > 0) || !(R >= 14 * epsilon))
        throw std::invalid_argument("psi functions need R >= 14*epsilon > 0");
}

/// Lower bound on the angle between two edges at a common vertex.
inline Scalar psi1(Scalar epsilon, Scalar R) {
    require_psi_domain(epsilon, R);
    const Scalar h = R / 2 - epsilon;
    return checked_acos((h * h - 18 * epsilon * epsilon) / (h * h));
}

/// Upper bound on the angle at a degree-2 vertex (and on degree-2 dihedrals).
inline Scalar psi2(Scalar epsilon, Scalar R) {
    require_psi_domain(epsilon, R);
    const Scalar t1 = std::atan((R + 3 * epsilon) / (6 * epsilon));
    const Scalar num = R * R - 4 * R * epsilon - 9 * epsilon * epsilon;
    const Scalar den =
        (R + epsilon) * std::sqrt(R * R + 6 * R * epsilon + 34 * epsilon * epsilon);
    return kPi - t1 + checked_asin(num / den);
}

/// Upper bound on ray angles at a cone vertex; also the dihedral threshold
/// below which the antipodal width test must fail.
inline Scalar psi3(Scalar epsilon, Scalar R) {
    require_psi_domain(epsilon, R);
    const Scalar a = R + 2 * epsilon;
    const Scalar b = 1.5 * R - epsilon;
    const Scalar w =
        2 * std::sqrt(R * R - epsilon * epsilon) - (2 + 2 * std::sqrt(2.0)) * epsilon;
    return checked_acos((a * a + b * b - w * w) / (2 * a * b));
}

struct Thresholds {
    Scalar epsilon = 1;
    Scalar R = 14;
    Scalar psi1 = 0, psi2 = 0, psi3 = 0;
    Scalar kappa = 0;
    Scalar beta = 0;   // inner-product bound  -R^2 + 2R eps + 7 eps^2
    Scalar gamma = 0;  // antipodal width bound 2 sqrt(R^2-eps^2) - (1+sqrt2) eps
    Scalar slack = 0;
    Scalar witness_r = 0;  // kappa*(R+2*eps) unless overridden

    static Thresholds make(Scalar epsilon, Scalar R, bool enforce_ratio = true) {
        if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
        if (enforce_ratio && !(R >= 14 * epsilon && R <= 16 * epsilon))
            throw std::invalid_argument("thresholds require 14*epsilon <= R <= 16*epsilon");
        Thresholds t;
        t.epsilon = epsilon;
        t.R = R;
        t.psi1 = strata::psi1(epsilon, std::max(R, 14 * epsilon));
        t.psi2 = strata::psi2(epsilon, std::max(R, 14 * epsilon));
        t.psi3 = strata::psi3(epsilon, std::max(R, 14 * epsilon));
        t.kappa = 2 * std::sqrt(2.0) / (std::sqrt(3.0) - 1);
        t.beta = -R * R + 2 * R * epsilon + 7 * epsilon * epsilon;
        t.gamma = 2 * std::sqrt(R * R - epsilon * epsilon) - (1 + std::sqrt(2.0)) * epsilon;
        t.slack = comparison_slack(R);
        t.witness_r = t.kappa * (R + 2 * epsilon);
        return t;
    }

    Scalar witness_radius() const { return witness_r; }
    Shell shell_at(const Point& p) const { return Shell{p, R - epsilon, R + epsilon}; }
};

}  // namespace strata
