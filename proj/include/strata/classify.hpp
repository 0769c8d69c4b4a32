#pragma once

#include "strata/topology.hpp"

namespace strata {

struct internal_consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LocalTest { signature, diameter, inner_product, antipodal, none };

inline const char* to_string(LocalTest t) {
    switch (t) {
        case LocalTest::signature: return "signature";
        case LocalTest::diameter: return "diameter";
        case LocalTest::inner_product: return "inner-product";
        case LocalTest::antipodal: return "antipodal-width";
        default: return "none";
    }
}

/// Per-sample classification record.
struct LocalClassification {
    std::uint32_t index = 0;
    int rk0 = 0;
    int rk1 = -1;  // -1: not computed (the decision did not depend on it)
    bool is_maximal = false;
    int dimension = -1;  // set iff maximal
    LocalTest fired = LocalTest::none;
    // shell component stats, filled when rk0 == 2 and the geometric tests ran
    Scalar diam_max = 0;
    Scalar inner_product = 0;
    Point mid1, mid2;
};

struct ClassifyOptions {
    /// Max component diameter for the dimension-1 test.  The conservative
    /// bound 2*sqrt(2)*eps keeps almost-closed vertex configurations out of
    /// the maximal class; values up to 5*eps are admissible.
    Scalar diameter_bound = 0;  // 0: use 2*sqrt(2)*epsilon
    /// Use the bracketed triple variant of the dimension-2 width test
    /// instead of the antipodal-partner test.
    bool bracket_antipodal = false;
    /// Compute both homology ranks by full reduction for every sample.
    bool exact_signatures = false;
    /// Always fill rk1 in the record even when the decision does not need it.
    bool full_signature = false;

    Scalar effective_diameter_bound(const Thresholds& t) const {
        return diameter_bound > 0 ? diameter_bound : 2 * std::sqrt(2.0) * t.epsilon;
    }
};

/// Precomputed per-cloud structures shared by all classifications.
class LocalToolkit {
public:
    LocalToolkit(const PointCloud& cloud, const Thresholds& t)
        : cloud_(cloud), t_(t), grid_(cloud, std::max<Scalar>(3 * t.epsilon, 1e-9)) {
        build_adjacency();
    }

    const PointCloud& cloud() const { return cloud_; }
    const Thresholds& thresholds() const { return t_; }
    const SpatialGrid& grid() const { return grid_; }

    /// Scratch space; one per worker thread.
    struct Scratch {
        std::vector<std::uint32_t> ball;        // cloud indices in the current ball
        std::vector<std::uint32_t> stamp;       // epoch marks, cloud-sized
        std::vector<std::uint32_t> visit_stamp;
        std::uint32_t epoch = 0;
        std::vector<std::uint32_t> queue;
        std::vector<std::uint32_t> shell;       // result set
        // local buffers for the signature machinery
        std::vector<std::uint32_t> qlocal;      // position of cloud index in Q
        std::vector<std::uint32_t> net;         // net member positions
        std::vector<std::uint32_t> assign;      // Q position -> net slot
    };

    Scratch make_scratch() const {
        Scratch s;
        s.stamp.assign(cloud_.size(), 0);
        s.visit_stamp.assign(cloud_.size(), 0);
        s.qlocal.assign(cloud_.size(), 0);
        return s;
    }

    /// Component of p in the 3-eps threshold graph on the closed ball
    /// B_{R+eps}(p), intersected with the closed shell [R-eps, R+eps].
    std::vector<std::uint32_t> shell_restricted_component(std::uint32_t p, Scratch& s) const {
        if (p >= cloud_.size()) throw std::invalid_argument("sample index out of range");
        const Scalar ball_r = t_.R + t_.epsilon + t_.slack;
        const Scalar inner = t_.R - t_.epsilon - t_.slack;
        const Scalar inner2 = inner > 0 ? inner * inner : 0;
        const Scalar ball2 = ball_r * ball_r;
        ++s.epoch;
        const auto pt = cloud_[p];
        s.ball.clear();
        grid_.for_each_in_ball(pt, ball_r, [&](std::uint32_t i) {
            s.stamp[i] = s.epoch;
            s.ball.push_back(i);
        });
        // BFS over the ball-restricted 3-eps graph
        s.queue.clear();
        s.shell.clear();
        s.queue.push_back(p);
        s.visit_stamp[p] = s.epoch;
        std::size_t head = 0;
        while (head < s.queue.size()) {
            const std::uint32_t u = s.queue[head++];
            const Scalar du2 = squared_distance(cloud_[u], pt);
            if (du2 >= inner2 && du2 <= ball2) s.shell.push_back(u);
            const auto nb = neighbors(u);
            for (std::uint32_t v : nb) {
                if (s.stamp[v] == s.epoch && s.visit_stamp[v] != s.epoch) {
                    s.visit_stamp[v] = s.epoch;
                    s.queue.push_back(v);
                }
            }
        }
        std::sort(s.shell.begin(), s.shell.end());
        return s.shell;
    }

    std::span<const std::uint32_t> neighbors(std::uint32_t i) const {
        return {adj_.data() + adj_offset_[i], adj_offset_[i + 1] - adj_offset_[i]};
    }

    LocalClassification classify(std::uint32_t p, Scratch& s,
                                 const ClassifyOptions& opt = {}) const;

private:
    void build_adjacency() {
        const std::size_t n = cloud_.size();
        const Scalar r = 3 * t_.epsilon + t_.slack;
        std::vector<std::vector<std::uint32_t>> tmp(n);
        for (std::size_t i = 0; i < n; ++i) {
            grid_.for_each_in_ball(cloud_[i], r, [&](std::uint32_t j) {
                if (j != i) tmp[i].push_back(j);
            });
        }
        adj_offset_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) adj_offset_[i + 1] = adj_offset_[i] + tmp[i].size();
        adj_.resize(adj_offset_[n]);
        for (std::size_t i = 0; i < n; ++i)
            std::copy(tmp[i].begin(), tmp[i].end(), adj_.begin() + adj_offset_[i]);
    }

    const PointCloud& cloud_;
    Thresholds t_;
    SpatialGrid grid_;
    std::vector<std::size_t> adj_offset_;
    std::vector<std::uint32_t> adj_;
};

namespace detail {

/// Delta-components (3-eps threshold graph) of a subset Q, via the toolkit's
/// adjacency lists.  Returns component id per Q position.
inline int subset_components(const LocalToolkit& tk, const std::vector<std::uint32_t>& Q,
                             LocalToolkit::Scratch& s, std::vector<int>& comp) {
    ++s.epoch;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        s.stamp[Q[i]] = s.epoch;
        s.qlocal[Q[i]] = static_cast<std::uint32_t>(i);
    }
    comp.assign(Q.size(), -1);
    int ncomp = 0;
    std::vector<std::uint32_t> stack;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        if (comp[i] >= 0) continue;
        stack.assign(1, static_cast<std::uint32_t>(i));
        comp[i] = ncomp;
        while (!stack.empty()) {
            const std::uint32_t u = stack.back();
            stack.pop_back();
            for (std::uint32_t v : tk.neighbors(Q[u])) {
                if (s.stamp[v] != s.epoch) continue;
                const std::uint32_t lv = s.qlocal[v];
                if (comp[lv] < 0) {
                    comp[lv] = ncomp;
                    stack.push_back(lv);
                }
            }
        }
        ++ncomp;
    }
    return ncomp;
}

/// Number of gamma-components (threshold 7-eps) of Q, given delta components.
/// Since every vertex is present at the small scale, this equals
/// rk0(3eps/2, 7eps/2) of Q.
inline int gamma_component_count(const PointCloud& P, const std::vector<std::uint32_t>& Q,
                                 const std::vector<int>& comp, int ncomp, Scalar gamma2r,
                                 std::vector<int>& gamma_of_comp) {
    gamma_of_comp.assign(ncomp, -1);
    if (ncomp <= 1) {
        if (ncomp == 1) gamma_of_comp[0] = 0;
        return ncomp;
    }
    // union-find over delta components, merging when any cross pair is close
    std::vector<int> parent(ncomp);
    for (int i = 0; i < ncomp; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const Scalar b2 = gamma2r * gamma2r;
    for (std::size_t i = 0; i < Q.size(); ++i)
        for (std::size_t j = i + 1; j < Q.size(); ++j) {
            const int ci = find(comp[i]), cj = find(comp[j]);
            if (ci == cj) continue;
            if (squared_distance(P[Q[i]], P[Q[j]]) <= b2) parent[ci] = cj;
        }
    int count = 0;
    for (int i = 0; i < ncomp; ++i)
        if (find(i) == i) ++count;
    for (int i = 0; i < ncomp; ++i) {
        int r = find(i);
        if (gamma_of_comp[r] < 0) gamma_of_comp[r] = 0;  // mark roots
    }
    return count;
}

/// Exact rk1(delta, gamma) of the sub-cloud Q by full two-tier reduction.
inline int exact_rk1(const PointCloud& P, const std::vector<std::uint32_t>& Q, Scalar delta,
                     Scalar gamma) {
    PointCloud sub(P.dim());
    for (auto i : Q) sub.push_back(P[i]);
    return homology_rank_of_inclusion(sub, delta, gamma, 1);
}

/// Reduction helper: triangle columns over edge indices, then membership /
/// rank queries for extra cycle vectors.
class CycleRankOracle {
public:
    /// edges must be lexicographically sorted pairs of local vertex ids.
    CycleRankOracle(std::size_t edge_count) : low_owner_(edge_count, -1) {}

    void add_triangle(std::array<std::uint32_t, 3> edge_ids) {
        std::vector<std::uint32_t> col(edge_ids.begin(), edge_ids.end());
        std::sort(col.begin(), col.end());
        reduce(col);
        if (!col.empty()) {
            const std::uint32_t low = col.back();
            low_owner_[low] = static_cast<std::int64_t>(stored_.size());
            stored_.push_back(std::move(col));
        }
    }

    /// Rank contribution of a cycle modulo the triangle boundaries and the
    /// previously surviving cycles; survivors extend the basis.
    bool add_cycle(std::vector<std::uint32_t> col) {
        std::sort(col.begin(), col.end());
        reduce(col);
        if (col.empty()) return false;
        const std::uint32_t low = col.back();
        low_owner_[low] = static_cast<std::int64_t>(stored_.size());
        stored_.push_back(std::move(col));
        return true;
    }

private:
    void reduce(std::vector<std::uint32_t>& col) const {
        std::vector<std::uint32_t> merged;
        while (!col.empty()) {
            const std::int64_t other = low_owner_[col.back()];
            if (other < 0) return;
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), stored_[other].begin(),
                                          stored_[other].end(), std::back_inserter(merged));
            col.swap(merged);
        }
    }

    std::vector<std::int64_t> low_owner_;
    std::vector<std::vector<std::uint32_t>> stored_;
};

/// Certified two-sided bound for rk1(delta, gamma) on Q.
///
/// A greedy net L of covering radius eta together with the nearest-net map
/// pi gives two computable ranks of the pushed delta-cycle space: against
/// the net complex at scale gamma - eta (an upper bound for the true rank,
/// by a prism argument) and at gamma + eta (a lower bound, by projecting).
/// When both agree the common value is exact.  Returns -1 when they differ.
/// Assumes subset_components has just marked Q in the scratch epoch.
inline int squeezed_rk1(const LocalToolkit& tk, const std::vector<std::uint32_t>& Q,
                        LocalToolkit::Scratch& s, const Thresholds& t) {
    const PointCloud& P = tk.cloud();
    const Scalar gamma = 3.5 * t.epsilon;
    const Scalar eta = 0.95 * t.epsilon;

    // greedy net in index order: packing radius eta implies covering <= eta
    std::vector<std::uint32_t>& net = s.net;  // positions into Q
    std::vector<std::uint32_t>& assign = s.assign;
    net.clear();
    assign.assign(Q.size(), 0);
    const Scalar eta2 = eta * eta;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        std::uint32_t best_slot = 0;
        for (std::size_t k = 0; k < net.size(); ++k) {
            const Scalar d2 = squared_distance(P[Q[i]], P[Q[net[k]]]);
            if (d2 < best) { best = d2; best_slot = static_cast<std::uint32_t>(k); }
        }
        if (best > eta2) {
            best_slot = static_cast<std::uint32_t>(net.size());
            net.push_back(static_cast<std::uint32_t>(i));
        }
        assign[i] = best_slot;
    }
    // second pass: map every point to its nearest net member (deterministic)
    for (std::size_t i = 0; i < Q.size(); ++i) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (std::size_t k = 0; k < net.size(); ++k) {
            const Scalar d2 = squared_distance(P[Q[i]], P[Q[net[k]]]);
            if (d2 < best) { best = d2; assign[i] = static_cast<std::uint32_t>(k); }
        }
    }
    const std::uint32_t m = static_cast<std::uint32_t>(net.size());

    // pushed delta-graph on net slots, via the precomputed 3-eps adjacency
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pushed;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        for (std::uint32_t v : tk.neighbors(Q[i])) {
            if (s.stamp[v] != s.epoch) continue;  // not in Q
            const std::uint32_t j = s.qlocal[v];
            if (j <= i) continue;
            const std::uint32_t a = assign[i], b = assign[j];
            if (a != b) pushed.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(pushed.begin(), pushed.end());
    pushed.erase(std::unique(pushed.begin(), pushed.end()), pushed.end());

    // spanning forest of the pushed graph; fundamental cycles are the
    // generators whose classes we track
    std::vector<int> parent(m);
    for (std::uint32_t i = 0; i < m; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> tree_edges, extra;
    for (auto [a, b] : pushed) {
        const int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            tree_edges.push_back({a, b});
        } else {
            extra.push_back({a, b});
        }
    }
    if (extra.empty()) return 0;  // no delta-born cycles at all

    // net complexes at gamma -/+ eta over one shared enumeration
    const Scalar s_hi = gamma - eta, s_lo = gamma + eta;
    const Scalar shi = s_hi + comparison_slack(s_hi), slo = s_lo + comparison_slack(s_lo);
    const Scalar shi2 = shi * shi, slo2 = slo * slo;

    std::vector<Point> L(m);
    for (std::uint32_t k = 0; k < m; ++k) L[k] = P.point(Q[net[k]]);

    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<char> edge_small;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> nbr(m);  // (b, edge id)
    for (std::uint32_t a = 0; a < m; ++a)
        for (std::uint32_t b = a + 1; b < m; ++b) {
            const Scalar r2 = min_enclosing_ball_radius_sq(L[a], L[b]);
            if (r2 <= slo2) {
                const auto id = static_cast<std::uint32_t>(edges.size());
                edges.push_back({a, b});
                edge_small.push_back(r2 <= shi2 ? 1 : 0);
                nbr[a].push_back({b, id});
                nbr[b].push_back({a, id});
            }
        }
    for (auto& v : nbr) std::sort(v.begin(), v.end());
    auto edge_id = [&](std::uint32_t a, std::uint32_t b) -> std::int64_t {
        if (a > b) std::swap(a, b);
        auto it = std::lower_bound(nbr[a].begin(), nbr[a].end(),
                                   std::pair<std::uint32_t, std::uint32_t>{b, 0});
        if (it == nbr[a].end() || it->first != b) return -1;
        return it->second;
    };

    // pushed edges must exist at the small scale for the bounds to apply
    for (auto [a, b] : pushed) {
        const std::int64_t id = edge_id(a, b);
        if (id < 0 || !edge_small[id]) return -1;
    }

    struct Tri {
        std::array<std::uint32_t, 3> e;
        char small;
    };
    std::vector<Tri> tris;
    for (std::uint32_t eid = 0; eid < edges.size(); ++eid) {
        const auto [a, b] = std::pair(edges[eid][0], edges[eid][1]);
        // intersect neighbour lists above b
        auto ia = nbr[a].begin(), ib = nbr[b].begin();
        while (ia != nbr[a].end() && ib != nbr[b].end()) {
            if (ia->first < ib->first) ++ia;
            else if (ib->first < ia->first) ++ib;
            else {
                const std::uint32_t c = ia->first;
                if (c > b) {
                    const Scalar r2 = min_enclosing_ball_radius_sq(L[a], L[b], L[c]);
                    if (r2 <= slo2)
                        tris.push_back(
                            {{eid, ia->second, ib->second},
                             static_cast<char>(r2 <= shi2 ? 1 : 0)});
                }
                ++ia;
                ++ib;
            }
        }
    }

    // fundamental cycles of the pushed graph as edge-id vectors
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> tree_adj(m);
    for (auto [a, b] : tree_edges) {
        const auto id = static_cast<std::uint32_t>(edge_id(a, b));
        tree_adj[a].push_back({b, id});
        tree_adj[b].push_back({a, id});
    }
    auto cycle_vector = [&](std::uint32_t a, std::uint32_t b) {
        std::vector<int> prev(m, -1);
        std::vector<std::uint32_t> prev_edge(m, 0);
        std::vector<std::uint32_t> q{a};
        prev[a] = static_cast<int>(a);
        std::size_t head = 0;
        while (head < q.size() && prev[b] < 0) {
            const std::uint32_t u = q[head++];
            for (auto [v, ei] : tree_adj[u])
                if (prev[v] < 0) {
                    prev[v] = static_cast<int>(u);
                    prev_edge[v] = ei;
                    q.push_back(v);
                }
        }
        std::vector<std::uint32_t> col{static_cast<std::uint32_t>(edge_id(a, b))};
        for (std::uint32_t v = b; prev[v] != static_cast<int>(v);
             v = static_cast<std::uint32_t>(prev[v]))
            col.push_back(prev_edge[v]);
        return col;
    };
    std::vector<std::vector<std::uint32_t>> cycles;
    for (auto [a, b] : extra) cycles.push_back(cycle_vector(a, b));

    auto rank_at = [&](bool small_only) {
        CycleRankOracle oracle(edges.size());
        for (const Tri& tr : tris)
            if (!small_only || tr.small) oracle.add_triangle(tr.e);
        int rank = 0;
        for (const auto& c : cycles)
            if (oracle.add_cycle(c)) ++rank;
        return rank;
    };
    const int upper = rank_at(true);  // fewer triangles can only enlarge the rank
    if (upper == 0) return 0;         // the lower bound is squeezed to 0 as well
    const int lower = rank_at(false);
    return lower == upper ? upper : -1;
}

}  // namespace detail

inline LocalClassification LocalToolkit::classify(std::uint32_t p, Scratch& s,
                                                  const ClassifyOptions& opt) const {
    LocalClassification rec;
    rec.index = p;
    const auto Q = shell_restricted_component(p, s);
    const Scalar delta = 1.5 * t_.epsilon, gamma = 3.5 * t_.epsilon;

    auto compute_rk1 = [&]() -> int {
        if (!opt.exact_signatures) {
            std::vector<int> comp2;
            detail::subset_components(*this, Q, s, comp2);  // refresh epoch marks
            const int r = detail::squeezed_rk1(*this, Q, s, t_);
            if (r >= 0) return r;
        }
        return detail::exact_rk1(cloud_, Q, delta, gamma);
    };

    if (Q.empty()) {
        rec.rk0 = 0;
        rec.rk1 = 0;
        rec.is_maximal = true;
        rec.dimension = 0;
        rec.fired = LocalTest::signature;
        return rec;
    }

    std::vector<int> comp;
    const int ncomp = detail::subset_components(*this, Q, s, comp);
    std::vector<int> gamma_roots;
    rec.rk0 = detail::gamma_component_count(cloud_, Q, comp, ncomp, 2 * gamma + t_.slack,
                                            gamma_roots);

    if (rec.rk0 == 2) {
        rec.rk1 = compute_rk1();
        if (rec.rk1 != 0) {  // signature (2,n), n != 0: no maximal case matches
            rec.is_maximal = false;
            rec.fired = LocalTest::signature;
            return rec;
        }
        if (ncomp != 2)
            throw internal_consistency_error(
                "signature (2,0) but the shell set has " + std::to_string(ncomp) +
                " components at threshold 3*epsilon");
        // component diameters and centroids
        std::array<std::vector<std::uint32_t>, 2> parts;
        for (std::size_t i = 0; i < Q.size(); ++i) parts[comp[i]].push_back(Q[i]);
        Scalar diam[2] = {0, 0};
        std::array<Point, 2> mid;
        for (int c = 0; c < 2; ++c) {
            Scalar best = 0;
            for (std::size_t i = 0; i < parts[c].size(); ++i)
                for (std::size_t j = i + 1; j < parts[c].size(); ++j)
                    best = std::max(best,
                                    squared_distance(cloud_[parts[c][i]], cloud_[parts[c][j]]));
            diam[c] = std::sqrt(best);
            Point centroid(cloud_.dim(), 0.0);
            for (auto idx : parts[c]) {
                auto pt = cloud_[idx];
                for (std::size_t k = 0; k < centroid.size(); ++k) centroid[k] += pt[k];
            }
            for (Scalar& x : centroid) x /= static_cast<Scalar>(parts[c].size());
            mid[c] = std::move(centroid);
        }
        rec.diam_max = std::max(diam[0], diam[1]);
        rec.mid1 = mid[0];
        rec.mid2 = mid[1];
        const Scalar bound = opt.effective_diameter_bound(t_);
        if (rec.diam_max > bound + t_.slack) {
            rec.is_maximal = false;
            rec.fired = LocalTest::diameter;
            return rec;
        }
        const Point d1 = sub(mid[0], cloud_.point(p)), d2 = sub(mid[1], cloud_.point(p));
        rec.inner_product = dot(d1, d2);
        rec.fired = LocalTest::inner_product;
        rec.is_maximal = rec.inner_product <= t_.beta + t_.slack;
        rec.dimension = rec.is_maximal ? 1 : -1;
        return rec;
    }

    if (rec.rk0 == 1) {
        // width test first: if it fails, the sample is not maximal for every
        // possible rk1, so the expensive rank is skipped unless requested
        bool width_ok;
        if (!opt.bracket_antipodal) {
            width_ok = true;
            for (std::size_t i = 0; i < Q.size() && width_ok; ++i) {
                bool has_far = false;
                const Scalar need = t_.gamma - t_.slack;
                const Scalar need2 = need * need;
                for (std::size_t j = 0; j < Q.size(); ++j) {
                    if (j == i) continue;
                    if (squared_distance(cloud_[Q[i]], cloud_[Q[j]]) >= need2) {
                        has_far = true;
                        break;
                    }
                }
                width_ok = has_far;
            }
        } else {
            const Scalar lo = std::sqrt(3 * (t_.R * t_.R - t_.epsilon * t_.epsilon)) - t_.slack;
            const Scalar hi = std::sqrt(3.0) * t_.R + t_.slack;
            width_ok = true;
            for (std::size_t i = 0; i < Q.size() && width_ok; ++i)
                for (std::size_t j = i + 1; j < Q.size() && width_ok; ++j) {
                    bool found = false;
                    for (std::size_t k = 0; k < Q.size() && !found; ++k) {
                        if (k == i || k == j) continue;
                        const Scalar a = distance(cloud_[Q[i]], cloud_[Q[k]]);
                        const Scalar b = distance(cloud_[Q[j]], cloud_[Q[k]]);
                        const Scalar c = distance(cloud_[Q[i]], cloud_[Q[j]]);
                        found = a >= lo && a <= hi && b >= lo && b <= hi && c >= lo && c <= hi;
                    }
                    width_ok = found;
                }
        }
        if (!width_ok && !opt.full_signature && !opt.exact_signatures) {
            rec.is_maximal = false;
            rec.fired = LocalTest::antipodal;
            return rec;
        }
        rec.rk1 = compute_rk1();
        if (rec.rk1 != 1) {
            rec.is_maximal = false;
            rec.fired = LocalTest::signature;
            return rec;
        }
        rec.is_maximal = width_ok;
        rec.dimension = width_ok ? 2 : -1;
        rec.fired = LocalTest::antipodal;
        return rec;
    }

    // rk0 not in {1,2}: no maximal case can match; (n,0) and every other
    // signature shape land in the not-maximal class
    if (opt.full_signature || opt.exact_signatures) rec.rk1 = compute_rk1();
    rec.is_maximal = false;
    rec.fired = LocalTest::signature;
    return rec;
}

/// Disjoint cover of the sample set by classification outcome.
struct Partition {
    std::vector<std::uint32_t> nlm;
    std::array<std::vector<std::uint32_t>, 3> lm;  // by dimension
    std::vector<LocalClassification> records;      // indexed by sample
};

inline Partition partition(const LocalToolkit& tk, const ClassifyOptions& opt = {}) {
    Partition part;
    part.records.resize(tk.cloud().size());
    auto scratch = tk.make_scratch();
    for (std::uint32_t i = 0; i < tk.cloud().size(); ++i) {
        part.records[i] = tk.classify(i, scratch, opt);
        if (part.records[i].is_maximal)
            part.lm[part.records[i].dimension].push_back(i);
        else
            part.nlm.push_back(i);
    }
    return part;
}

}  // namespace strata
