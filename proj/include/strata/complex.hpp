#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "strata/cloud.hpp"
#include "strata/geometry.hpp"

namespace strata {

using VertexId = int;
using Edge = std::array<VertexId, 2>;      // sorted
using Triangle = std::array<VertexId, 3>;  // sorted

inline Edge make_edge(VertexId a, VertexId b) {
    if (a == b) throw std::invalid_argument("edge endpoints must be distinct");
    if (a > b) std::swap(a, b);
    return {a, b};
}

inline Triangle make_triangle(VertexId a, VertexId b, VertexId c) {
    Triangle t{a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2])
        throw std::invalid_argument("triangle vertices must be distinct");
    return t;
}

/// A cell of a 2-complex: 1, 2 or 3 sorted vertex ids.
struct Cell {
    std::array<VertexId, 3> v{-1, -1, -1};
    int dim = 0;  // 0, 1, 2

    static Cell vertex(VertexId a) { return Cell{{a, -1, -1}, 0}; }
    static Cell edge(Edge e) { return Cell{{e[0], e[1], -1}, 1}; }
    static Cell triangle(Triangle t) { return Cell{{t[0], t[1], t[2]}, 2}; }

    bool subset_of(const Cell& other) const {
        for (int i = 0; i <= dim; ++i) {
            bool found = false;
            for (int j = 0; j <= other.dim; ++j) found |= (v[i] == other.v[j]);
            if (!found) return false;
        }
        return true;
    }
    bool proper_subset_of(const Cell& other) const {
        return dim < other.dim && subset_of(other);
    }
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell& a, const Cell& b) {
        if (a.dim != b.dim) return a.dim <=> b.dim;
        return a.v <=> b.v;
    }
};

/// Abstract 2-complex: vertex, edge and triangle sets closed under faces.
class AbstractTwoComplex {
public:
    void add_vertex(VertexId v) { vertices_.insert(v); }

    void add_edge(VertexId a, VertexId b) {
        Edge e = make_edge(a, b);
        edges_.insert(e);
        vertices_.insert(e[0]);
        vertices_.insert(e[1]);
    }

    void add_triangle(VertexId a, VertexId b, VertexId c) {
        Triangle t = make_triangle(a, b, c);
        triangles_.insert(t);
        add_edge(t[0], t[1]);
        add_edge(t[0], t[2]);
        add_edge(t[1], t[2]);
    }

    const std::set<VertexId>& vertices() const { return vertices_; }
    const std::set<Edge>& edges() const { return edges_; }
    const std::set<Triangle>& triangles() const { return triangles_; }

    bool has_edge(VertexId a, VertexId b) const { return edges_.count(make_edge(a, b)) > 0; }

    std::vector<Cell> all_cells() const {
        std::vector<Cell> cells;
        for (VertexId v : vertices_) cells.push_back(Cell::vertex(v));
        for (const Edge& e : edges_) cells.push_back(Cell::edge(e));
        for (const Triangle& t : triangles_) cells.push_back(Cell::triangle(t));
        return cells;
    }

    std::vector<Edge> edges_at(VertexId v) const {
        std::vector<Edge> out;
        for (const Edge& e : edges_)
            if (e[0] == v || e[1] == v) out.push_back(e);
        return out;
    }

    std::vector<Triangle> triangles_at(VertexId v) const {
        std::vector<Triangle> out;
        for (const Triangle& t : triangles_)
            if (t[0] == v || t[1] == v || t[2] == v) out.push_back(t);
        return out;
    }

    std::vector<Triangle> triangles_on(const Edge& e) const {
        std::vector<Triangle> out;
        for (const Triangle& t : triangles_)
            if (Cell::edge(e).subset_of(Cell::triangle(t))) out.push_back(t);
        return out;
    }

private:
    std::set<VertexId> vertices_;
    std::set<Edge> edges_;
    std::set<Triangle> triangles_;
};

/// Cells with no proper coface.
inline std::vector<Cell> locally_maximal_cells(const AbstractTwoComplex& X) {
    std::vector<Cell> all = X.all_cells();
    std::vector<Cell> out;
    for (const Cell& c : all) {
        bool maximal = true;
        for (const Cell& d : all)
            if (c.proper_subset_of(d)) { maximal = false; break; }
        if (maximal) out.push_back(c);
    }
    return out;
}

/// Weighted incidence graph.  Node weights are cell dimensions; arcs join
/// nodes whose cells are in a strict face relation.
struct IncidenceGraph {
    struct Node {
        int weight = 0;
        std::string label;  // provenance
    };
    std::vector<Node> nodes;
    std::set<std::pair<int, int>> arcs;  // sorted index pairs

    int add_node(int weight, std::string label) {
        nodes.push_back({weight, std::move(label)});
        return static_cast<int>(nodes.size()) - 1;
    }
    void add_arc(int i, int j) {
        if (i == j) throw std::invalid_argument("self arc in incidence graph");
        if (nodes[i].weight == nodes[j].weight)
            throw std::invalid_argument("incidence arcs join nodes of different weight");
        arcs.insert({std::min(i, j), std::max(i, j)});
    }

    std::array<int, 3> weight_counts() const {
        std::array<int, 3> c{0, 0, 0};
        for (const Node& n : nodes) c[n.weight]++;
        return c;
    }
};

inline IncidenceGraph incidence_graph_of(const AbstractTwoComplex& X) {
    IncidenceGraph g;
    std::map<Cell, int> index;
    for (const Cell& c : X.all_cells()) {
        std::string label;
        for (int i = 0; i <= c.dim; ++i) label += (i ? "-" : "") + std::to_string(c.v[i]);
        static const char* prefix[3] = {"v", "e", "t"};
        index[c] = g.add_node(c.dim, std::string(prefix[c.dim]) + label);
    }
    for (const auto& [c, i] : index)
        for (const auto& [d, j] : index)
            if (c.proper_subset_of(d)) g.add_arc(i, j);
    return g;
}

/// Deterministic text form: nodes sorted by (weight, label), then arcs.
inline void write_incidence_graph(std::ostream& os, const IncidenceGraph& g) {
    std::vector<int> order(g.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.nodes[a].weight != g.nodes[b].weight) return g.nodes[a].weight < g.nodes[b].weight;
        if (g.nodes[a].label != g.nodes[b].label) return g.nodes[a].label < g.nodes[b].label;
        return a < b;
    });
    std::vector<int> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& n = g.nodes[order[i]];
        os << "node " << i << " weight " << n.weight << " label " << n.label << "\n";
    }
    std::vector<std::pair<int, int>> arcs;
    for (auto [a, b] : g.arcs) {
        int i = rank[a], j = rank[b];
        arcs.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(arcs.begin(), arcs.end());
    for (auto [i, j] : arcs) os << "arc " << i << " " << j << "\n";
}

/// Linear embedding: vertex coordinates in R^n (n >= 3), extended by linear
/// interpolation over edges and triangles.
struct LinearEmbedding {
    AbstractTwoComplex complex;
    std::map<VertexId, Point> theta;

    std::size_t dim() const { return theta.empty() ? 0 : theta.begin()->second.size(); }

    const Point& at(VertexId v) const {
        auto it = theta.find(v);
        if (it == theta.end()) throw std::invalid_argument("vertex has no coordinates");
        return it->second;
    }

    Scalar distance_to_cell(std::span<const Scalar> p, const Cell& c) const {
        switch (c.dim) {
            case 0: return distance(p, at(c.v[0]));
            case 1: return distance_point_segment(p, at(c.v[0]), at(c.v[1]));
            default: return distance_point_triangle(p, at(c.v[0]), at(c.v[1]), at(c.v[2]));
        }
    }

    /// Distance from p to the embedded complex |X|.
    Scalar distance_to_complex(std::span<const Scalar> p) const {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (const Cell& c : complex.all_cells()) best = std::min(best, distance_to_cell(p, c));
        return best;
    }
};

// --- ground-truth complex file format ------------------------------------
// header "dim n", then lines "v <id> <n coords>", "e <id> <id>", "t <id> <id> <id>"

inline void write_embedding(std::ostream& os, const LinearEmbedding& E) {
    os << "dim " << E.dim() << "\n" << std::setprecision(17);
    for (const auto& [v, p] : E.theta) {
        os << "v " << v;
        for (Scalar x : p) os << " " << x;
        os << "\n";
    }
    for (const Edge& e : E.complex.edges()) os << "e " << e[0] << " " << e[1] << "\n";
    for (const Triangle& t : E.complex.triangles())
        os << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

inline void save_embedding(const std::string& path, const LinearEmbedding& E) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_embedding(os, E);
}

inline LinearEmbedding read_embedding(std::istream& is) {
    std::string kw;
    std::size_t dim = 0;
    if (!(is >> kw >> dim) || kw != "dim")
        throw parse_error("complex file must start with 'dim <n>'");
    if (dim < 3) throw parse_error("ambient dimension must be >= 3");
    LinearEmbedding E;
    std::string tag;
    while (is >> tag) {
        if (tag == "v") {
            VertexId id;
            if (!(is >> id)) throw parse_error("bad vertex line");
            Point p(dim);
            for (std::size_t k = 0; k < dim; ++k)
                if (!(is >> p[k])) throw parse_error("bad vertex coordinates");
            E.complex.add_vertex(id);
            E.theta[id] = std::move(p);
        } else if (tag == "e") {
            VertexId a, b;
            if (!(is >> a >> b)) throw parse_error("bad edge line");
            E.complex.add_edge(a, b);
        } else if (tag == "t") {
            VertexId a, b, c;
            if (!(is >> a >> b >> c)) throw parse_error("bad triangle line");
            E.complex.add_triangle(a, b, c);
        } else {
            throw parse_error("unknown record '" + tag + "' in complex file");
        }
    }
    for (VertexId v : E.complex.vertices())
        if (!E.theta.count(v)) throw parse_error("vertex without coordinates: " + std::to_string(v));
    return E;
}

inline LinearEmbedding load_embedding(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open " + path);
    return read_embedding(is);
}

}  // namespace strata
