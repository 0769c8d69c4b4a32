#pragma once

#include "strata/classify.hpp"
#include "strata/complex.hpp"

namespace strata {

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct unclassifiable_partition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpanningComponent {
    enum class Kind { vertex_cluster, edge, triangle };
    Kind kind;
    std::vector<std::uint32_t> members;  // sorted cloud indices
    Scalar diam = 0;
};

struct NlmPartition {
    std::vector<std::uint32_t> members;  // sorted cloud indices
    std::set<int> se;                    // witnessed edge-spanning component ids
    std::set<int> st;                    // witnessed triangle-spanning component ids
    int label = -100;                    // unset
    bool all_sig_1n = true;              // every member has rk0 == 1
};

inline Scalar subset_diameter(const PointCloud& P, const std::vector<std::uint32_t>& idx) {
    Scalar best = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            best = std::max(best, squared_distance(P[idx[i]], P[idx[j]]));
    return std::sqrt(best);
}

/// Connected components of the 3-eps threshold graph on a subset, using the
/// toolkit adjacency.  Components are sorted by smallest member.
inline std::vector<std::vector<std::uint32_t>> subset_threshold_components(
    const LocalToolkit& tk, const std::vector<std::uint32_t>& subset) {
    std::vector<char> in(tk.cloud().size(), 0);
    for (auto i : subset) in[i] = 1;
    std::vector<char> seen(tk.cloud().size(), 0);
    std::vector<std::vector<std::uint32_t>> comps;
    for (auto s : subset) {
        if (seen[s]) continue;
        std::vector<std::uint32_t> stack{s}, comp;
        seen[s] = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (auto v : tk.neighbors(u))
                if (in[v] && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

/// Each component of P_LM0 is one locally maximal vertex.
inline std::vector<SpanningComponent> vertex_clusters(const LocalToolkit& tk,
                                                      const std::vector<std::uint32_t>& lm0) {
    std::vector<SpanningComponent> out;
    for (auto& c : subset_threshold_components(tk, lm0))
        out.push_back({SpanningComponent::Kind::vertex_cluster, std::move(c), 0});
    return out;
}

/// Components of P_LM1 whose diameter certifies a spanned edge.
inline std::vector<SpanningComponent> spanning_edge_components(
    const LocalToolkit& tk, const std::vector<std::uint32_t>& lm1) {
    const Thresholds& t = tk.thresholds();
    const Scalar bound = 1.5 * t.R - 2 * t.epsilon;
    std::vector<SpanningComponent> out;
    for (auto& c : subset_threshold_components(tk, lm1)) {
        const Scalar d = subset_diameter(tk.cloud(), c);
        if (d >= bound - t.slack)
            out.push_back({SpanningComponent::Kind::edge, std::move(c), d});
    }
    return out;
}

/// Components of P_LM2 containing a deep point whose R/2+eps ball meets only
/// P_LM2 samples.
inline std::vector<SpanningComponent> spanning_triangle_components(
    const LocalToolkit& tk, const std::vector<std::uint32_t>& lm2) {
    const Thresholds& t = tk.thresholds();
    std::vector<char> is_lm2(tk.cloud().size(), 0);
    for (auto i : lm2) is_lm2[i] = 1;
    const Scalar r = t.R / 2 + t.epsilon + t.slack;
    std::vector<SpanningComponent> out;
    for (auto& c : subset_threshold_components(tk, lm2)) {
        bool deep = false;
        for (auto i : c) {
            bool all_lm2 = true;
            tk.grid().for_each_in_ball(tk.cloud()[i], r, [&](std::uint32_t j) {
                if (!is_lm2[j]) all_lm2 = false;
            });
            if (all_lm2) { deep = true; break; }
        }
        if (deep) {
            const Scalar d = subset_diameter(tk.cloud(), c);
            out.push_back({SpanningComponent::Kind::triangle, std::move(c), d});
        }
    }
    return out;
}

namespace detail {

/// Answers "which spanning components meet the ball around p" using a
/// cell-level summary of the cloud grid.  Exact: boundary cells fall back to
/// per-point distances.
class WitnessIndex {
public:
    WitnessIndex(const LocalToolkit& tk, const std::vector<SpanningComponent>& edge_comps,
                 const std::vector<SpanningComponent>& tri_comps)
        : tk_(tk) {
        owner_.assign(tk.cloud().size(), -1);
        for (std::size_t c = 0; c < edge_comps.size(); ++c)
            for (auto i : edge_comps[c].members) owner_[i] = static_cast<int>(c);
        for (std::size_t c = 0; c < tri_comps.size(); ++c)
            for (auto i : tri_comps[c].members)
                owner_[i] = static_cast<int>(edge_comps.size() + c);
        n_edge_ = static_cast<int>(edge_comps.size());
    }

    /// Fills se/st with component ids within distance w of p (closed).
    void witnessed(std::uint32_t p, Scalar w, std::set<int>& se, std::set<int>& st) const {
        se.clear();
        st.clear();
        const auto pt = tk_.cloud()[p];
        tk_.grid().for_each_in_ball(pt, w, [&](std::uint32_t j) {
            const int o = owner_[j];
            if (o < 0) return;
            if (o < n_edge_) se.insert(o);
            else st.insert(o - n_edge_);
        });
    }

private:
    const LocalToolkit& tk_;
    std::vector<int> owner_;
    int n_edge_ = 0;
};

}  // namespace detail

struct RecoveryResult {
    std::vector<SpanningComponent> clusters, edge_comps, tri_comps;
    std::vector<NlmPartition> partitions;
    IncidenceGraph graph;
    std::vector<std::string> log;
};

namespace detail {

/// Node slots owned by a labelled partition: (edge nodes, vertex nodes).
inline std::pair<int, int> label_plan(int label) {
    switch (label) {
        case -1: return {0, 2};
        case 0: return {0, 1};
        case 1: return {1, 1};
        case 2: return {1, 2};
        case 3: return {1, 0};
        case 4: return {2, 1};
        case 5: return {3, 2};
        case 6: return {3, 1};
        case 7: return {3, 3};
        case 8: return {3, 0};
        case 9: return {2, 0};
        default: throw unclassifiable_partition_error("partition with no label");
    }
}

/// Required number of internal (edge,vertex) cycle pairings per label.
inline int internal_pairings(int label) {
    switch (label) {
        case 1: return 1;
        case 2: return 2;
        case 4: return 2;
        case 5: return 4;
        case 6: return 2;
        case 7: return 6;
        default: return 0;
    }
}

}  // namespace detail

/// Runs the full structure-recovery pass over a classified cloud.
/// `records` may gain lazily computed rk1 values (merge rule inspection).
class Recovery {
public:
    Recovery(const LocalToolkit& tk, Partition& part, std::vector<std::string>* log = nullptr)
        : tk_(tk), part_(part), log_(log) {}

    RecoveryResult run() {
        RecoveryResult res;
        res.clusters = vertex_clusters(tk_, part_.lm[0]);
        res.edge_comps = spanning_edge_components(tk_, part_.lm[1]);
        res.tri_comps = spanning_triangle_components(tk_, part_.lm[2]);
        partition_nlm(res);
        order_and_label(res);
        assemble(res);
        if (log_) res.log = *log_;
        return res;
    }

private:
    void note(const std::string& s) {
        if (log_) log_->push_back(s);
    }

    // ---- Alg 5: witness sets, grouping, merge ----------------------------
    void partition_nlm(RecoveryResult& res) {
        const Thresholds& t = tk_.thresholds();
        const Scalar w = t.witness_radius() + t.slack;
        detail::WitnessIndex wi(tk_, res.edge_comps, res.tri_comps);

        std::map<std::pair<std::set<int>, std::set<int>>, NlmPartition> groups;
        std::set<int> se, st;
        for (auto p : part_.nlm) {
            wi.witnessed(p, w, se, st);
            if (se.empty() && st.empty())
                throw structural_error("non-maximal sample " + std::to_string(p) +
                                       " witnesses no spanning component");
            auto& g = groups[{se, st}];
            g.members.push_back(p);
            g.se = se;
            g.st = st;
            if (part_.records[p].rk0 != 1) g.all_sig_1n = false;
        }
        std::vector<NlmPartition> parts;
        for (auto& [key, g] : groups) parts.push_back(std::move(g));

        // merge pass: absorb straddling fragments into their witness supersets
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t j = 0; j < parts.size() && !changed; ++j) {
                for (std::size_t i = 0; i < parts.size() && !changed; ++i) {
                    if (i == j) continue;
                    const auto& pj = parts[j];
                    const auto& pi = parts[i];
                    if (pj.se == pi.se && pj.st == pi.st) continue;
                    if (!std::includes(pi.se.begin(), pi.se.end(), pj.se.begin(), pj.se.end()))
                        continue;
                    if (!std::includes(pi.st.begin(), pi.st.end(), pj.st.begin(), pj.st.end()))
                        continue;
                    const bool rule1 = !pj.se.empty() && !pj.st.empty();
                    const bool rule2 = pj.st.size() >= 2 && all_members_sig_n0(pj);
                    if (!rule1 && !rule2) continue;
                    // merge j into i
                    parts[i].members.insert(parts[i].members.end(), pj.members.begin(),
                                            pj.members.end());
                    parts[i].all_sig_1n = parts[i].all_sig_1n && pj.all_sig_1n;
                    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                }
            }
        }
        for (auto& p : parts) std::sort(p.members.begin(), p.members.end());
        std::sort(parts.begin(), parts.end(), [](const NlmPartition& a, const NlmPartition& b) {
            return a.members.front() < b.members.front();
        });
        res.partitions = std::move(parts);
    }

    /// Every member signature has shape (n, 0); computes rk1 lazily.
    bool all_members_sig_n0(const NlmPartition& p) {
        auto scratch = tk_.make_scratch();
        for (auto idx : p.members) {
            auto& rec = part_.records[idx];
            if (rec.rk1 < 0) {
                ClassifyOptions opt;
                opt.full_signature = true;
                rec = tk_.classify(idx, scratch, opt);
            }
            if (rec.rk1 != 0) return false;
        }
        return true;
    }

    // ---- Alg 6/7/8: ordering and labels ----------------------------------
    void order_and_label(RecoveryResult& res) {
        auto& parts = res.partitions;
        const int n = static_cast<int>(parts.size());

        std::vector<int> p1, p2;
        for (int i = 0; i < n; ++i) {
            if (!parts[i].se.empty()) p1.push_back(i);
            else if (!parts[i].all_sig_1n) p1.push_back(i);
            else if (parts[i].st.size() != 1) p1.push_back(i);
            else p2.push_back(i);
        }

        auto ln = [&](int tri_comp) {
            std::vector<int> out;
            for (int k = 0; k < n; ++k)
                if (parts[k].st.count(tri_comp)) out.push_back(k);
            return out;
        };

        // Alg 7 over P1
        for (int i : p1) {
            auto& pi = parts[i];
            if (pi.se.size() == 1 && pi.st.empty()) {
                const int e = *pi.se.begin();
                bool shared = false;
                for (int k = 0; k < n; ++k)
                    if (k != i && parts[k].se.count(e)) shared = true;
                pi.label = shared ? 0 : -1;
            } else if (!pi.se.empty()) {
                pi.label = 0;
            } else {
                // N(P_i) = intersection of the witness neighbourhoods of the
                // triangle components P_i sees
                std::vector<int> inter;
                bool first = true;
                for (int tc : pi.st) {
                    auto l = ln(tc);
                    if (first) { inter = l; first = false; }
                    else {
                        std::vector<int> merged;
                        std::set_intersection(inter.begin(), inter.end(), l.begin(), l.end(),
                                              std::back_inserter(merged));
                        inter = std::move(merged);
                    }
                }
                if (inter.size() == 2) {
                    pi.label = 1;
                    const int other = inter[0] == i ? inter[1] : inter[0];
                    if (parts[other].label == -100) parts[other].label = 0;
                } else if (inter.size() == 3) {
                    pi.label = 3;
                    for (int k : inter)
                        if (k != i && parts[k].label == -100) parts[k].label = 0;
                }
            }
        }
        // trailing rule: remaining P1 partitions correspond either to a shared
        // edge plus its endpoints (all signatures of shape (1,n)) or to a bare
        // vertex where several maximal cells meet
        for (int i : p1)
            if (parts[i].label == -100) parts[i].label = parts[i].all_sig_1n ? 2 : 0;

        // Alg 8 over P2: the label is the remainder of the witnessed triangle
        // after subtracting the cells accounted for by the other witnesses
        for (int i : p2) {
            auto& pi = parts[i];
            if (pi.label != -100) continue;
            const int tc = *pi.st.begin();
            int edges_used = 0, verts_used = 0;
            for (int k : ln(tc)) {
                if (k == i) continue;
                const int lab = parts[k].label;
                if (lab == -100)
                    throw unclassifiable_partition_error(
                        "unlabelled co-witness while classifying a remainder partition");
                const auto [e, v] = detail::label_plan(lab);
                edges_used += e;
                verts_used += v;
            }
            const int er = 3 - edges_used, vr = 3 - verts_used;
            int label = -100;
            if (er == 3 && vr == 3) label = 7;
            else if (er == 3 && vr == 2) label = 5;
            else if (er == 3 && vr == 1) label = 6;
            else if (er == 3 && vr == 0) label = 8;
            else if (er == 2 && vr == 1) label = 4;
            else if (er == 2 && vr == 0) label = 9;
            else if (er == 1 && vr == 1) label = 1;
            else if (er == 1 && vr == 2) label = 2;
            else if (er == 1 && vr == 0) label = 3;
            else if (er == 0 && vr == 1) label = 0;
            if (label == -100)
                throw unclassifiable_partition_error(
                    "no label fits remainder (" + std::to_string(er) + " edges, " +
                    std::to_string(vr) + " vertices)");
            pi.label = label;
        }
        for (auto& p : parts)
            if (p.label == -100)
                throw unclassifiable_partition_error("partition left without a label");
    }

    // ---- Alg 9 + assembly -------------------------------------------------
    void assemble(RecoveryResult& res) {
        auto& g = res.graph;
        const int n = static_cast<int>(res.partitions.size());

        std::vector<int> tri_node(res.tri_comps.size()), edge_node(res.edge_comps.size());
        for (std::size_t i = 0; i < res.tri_comps.size(); ++i)
            tri_node[i] = g.add_node(2, "T" + std::to_string(i));
        for (std::size_t i = 0; i < res.edge_comps.size(); ++i)
            edge_node[i] = g.add_node(1, "E" + std::to_string(i));
        for (std::size_t i = 0; i < res.clusters.size(); ++i)
            g.add_node(0, "V" + std::to_string(i));

        // node pools per partition
        std::vector<std::vector<int>> pool_e(n), pool_v(n);
        for (int i = 0; i < n; ++i) {
            const auto [ne, nv] = detail::label_plan(res.partitions[i].label);
            for (int k = 0; k < ne; ++k)
                pool_e[i].push_back(g.add_node(1, "P" + std::to_string(i) + "e" +
                                                      std::to_string(k)));
            for (int k = 0; k < nv; ++k)
                pool_v[i].push_back(g.add_node(0, "P" + std::to_string(i) + "v" +
                                                      std::to_string(k)));
        }

        // partition adjacency at 3 eps, from the cloud adjacency lists
        std::vector<int> part_of(tk_.cloud().size(), -1);
        for (int i = 0; i < n; ++i)
            for (auto idx : res.partitions[i].members) part_of[idx] = i;
        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        for (std::uint32_t q = 0; q < tk_.cloud().size(); ++q) {
            const int a = part_of[q];
            if (a < 0) continue;
            for (auto v : tk_.neighbors(q)) {
                const int b = part_of[v];
                if (b >= 0 && b != a) adj[a][b] = adj[b][a] = 1;
            }
        }
        // triangle-component adjacency to partitions (3 eps)
        std::vector<int> tri_of(tk_.cloud().size(), -1);
        for (std::size_t c = 0; c < res.tri_comps.size(); ++c)
            for (auto idx : res.tri_comps[c].members) tri_of[idx] = static_cast<int>(c);
        std::vector<std::set<int>> near_tri(res.tri_comps.size());
        for (std::uint32_t q = 0; q < tk_.cloud().size(); ++q) {
            const int a = part_of[q];
            if (a < 0) continue;
            for (auto v : tk_.neighbors(q)) {
                const int c = tri_of[v];
                if (c >= 0) near_tri[c].insert(a);
            }
        }

        // locally maximal edges: wire their nodes to the witnessing partitions
        for (std::size_t e = 0; e < res.edge_comps.size(); ++e) {
            std::vector<int> ws;
            for (int i = 0; i < n; ++i)
                if (res.partitions[i].se.count(static_cast<int>(e))) ws.push_back(i);
            if (ws.empty()) throw structural_error("edge component with no witnesses");
            if (ws.size() == 1 && res.partitions[ws[0]].label == -1) {
                g.add_arc(edge_node[e], pool_v[ws[0]][0]);
                g.add_arc(edge_node[e], pool_v[ws[0]][1]);
                continue;
            }
            for (int i : ws) {
                if (pool_v[i].empty())
                    throw structural_error("edge witness partition owns no vertex node");
                g.add_arc(edge_node[e], pool_v[i][0]);
            }
        }

        // triangles: find the boundary partitions and wire the six-cycle
        for (std::size_t c = 0; c < res.tri_comps.size(); ++c) {
            std::vector<int> pt(near_tri[c].begin(), near_tri[c].end());
            if (pt.empty()) {
                note("triangle component " + std::to_string(c) +
                     " has no 3-eps adjacent partition; falling back to witnesses");
                for (int i = 0; i < n; ++i)
                    if (res.partitions[i].st.count(static_cast<int>(c))) pt.push_back(i);
            }
            if (pt.empty() || pt.size() > 6)
                throw structural_error("triangle component with " + std::to_string(pt.size()) +
                                       " boundary partitions");
            wire_triangle(res, g, static_cast<int>(c), tri_node[c], pt, pool_e, pool_v, adj);
        }
    }

    struct Slot {
        int part;  // partition index
        int node;  // graph node
        int k;     // slot position within the pool
    };

    void wire_triangle(RecoveryResult& res, IncidenceGraph& g, int comp, int tnode,
                       const std::vector<int>& pt, const std::vector<std::vector<int>>& pool_e,
                       const std::vector<std::vector<int>>& pool_v,
                       const std::vector<std::vector<char>>& adj) {
        (void)comp;
        // collect slots
        std::vector<Slot> es, vs;
        for (int i : pt) {
            for (std::size_t k = 0; k < pool_e[i].size(); ++k)
                es.push_back({i, pool_e[i][k], static_cast<int>(k)});
            for (std::size_t k = 0; k < pool_v[i].size(); ++k)
                vs.push_back({i, pool_v[i][k], static_cast<int>(k)});
        }
        {
            std::multiset<int> labels;
            for (int i : pt) labels.insert(res.partitions[i].label);
            static const std::vector<std::multiset<int>> valid = {
                {7},          {0, 5},          {2, 4},       {0, 0, 6},       {0, 1, 4},
                {0, 2, 9},    {0, 0, 0, 8},    {0, 0, 1, 9}, {0, 0, 3, 4},    {0, 1, 1, 3},
                {0, 0, 1, 3, 3}, {0, 0, 0, 3, 9}, {0, 0, 0, 3, 3, 3}};
            if (std::find(valid.begin(), valid.end(), labels) == valid.end()) {
                std::string s;
                for (int l : labels) s += std::to_string(l) + " ";
                throw structural_error("label pattern { " + s +
                                       "} matches no incidence-assembly case");
            }
        }
        if (es.size() != 3 || vs.size() != 3)
            throw structural_error("triangle boundary does not provide 3 edges and 3 vertices");

        // wire the weight-2 node to everything
        for (const Slot& s : es) g.add_arc(tnode, s.node);
        for (const Slot& s : vs) g.add_arc(tnode, s.node);

        // choose the six-cycle (e1,v1),(e1,v2),(e2,v2),(e2,v3),(e3,v3),(e3,v1):
        // brute-force slot-to-role assignments, requiring each partition's
        // internal pairing count to match its label and every cross pairing
        // to join 3-eps adjacent partitions.
        static const int pairs[6][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}};
        std::array<int, 3> pe{0, 1, 2}, pv{0, 1, 2};
        std::array<int, 3> best_pe{}, best_pv{};
        int best_cost = std::numeric_limits<int>::max();
        std::sort(pe.begin(), pe.end());
        do {
            std::array<int, 3> pv2{0, 1, 2};
            std::sort(pv2.begin(), pv2.end());
            do {
                std::map<int, int> internal;
                int cross_bad = 0;
                for (auto [ei, vi] : pairs) {
                    const Slot& e = es[pe[ei]];
                    const Slot& v = vs[pv2[vi]];
                    if (e.part == v.part) internal[e.part]++;
                    else if (!adj[e.part][v.part]) ++cross_bad;
                }
                bool ok = true;
                for (int i : std::vector<int>(pt.begin(), pt.end())) {
                    const int want = detail::internal_pairings(res.partitions[i].label);
                    if (internal.count(i) ? internal[i] != want : want != 0) ok = false;
                }
                if (ok && cross_bad < best_cost) {
                    best_cost = cross_bad;
                    best_pe = pe;
                    best_pv = pv2;
                }
            } while (std::next_permutation(pv2.begin(), pv2.end()));
        } while (std::next_permutation(pe.begin(), pe.end()));
        if (best_cost == std::numeric_limits<int>::max())
            throw structural_error("no admissible boundary-cycle assignment");
        if (best_cost > 0)
            note("boundary cycle uses " + std::to_string(best_cost) +
                 " non-adjacent pairings");
        for (auto [ei, vi] : pairs)
            g.add_arc(es[best_pe[ei]].node, vs[best_pv[vi]].node);
    }

    const LocalToolkit& tk_;
    Partition& part_;
    std::vector<std::string>* log_;
};

inline RecoveryResult recover_structure(const LocalToolkit& tk, Partition& part,
                                        std::vector<std::string>* log = nullptr) {
    Recovery r(tk, part, log);
    return r.run();
}

}  // namespace strata
