#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bdiv/rat.hpp"

namespace bdiv {

// A rational point of a metrized graph: a vertex, or an interior point of an
// edge at exact arclength `offset` from the edge's first endpoint.
struct GraphPoint {
    enum class Kind { Vertex, OnEdge };
    Kind kind = Kind::Vertex;
    int index = 0;
    Rat offset;

    static GraphPoint vertex(int v) { return {Kind::Vertex, v, Rat(0)}; }
    static GraphPoint on_edge(int e, Rat t) { return {Kind::OnEdge, e, std::move(t)}; }

    bool is_vertex() const { return kind == Kind::Vertex; }

    friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
        return a.kind == b.kind && a.index == b.index && (a.kind == Kind::Vertex || a.offset == b.offset);
    }
    friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.index != b.index) return a.index < b.index;
        if (a.kind == Kind::Vertex) return false;
        return a.offset < b.offset;
    }
};

std::string to_string(const GraphPoint& p);

// Compact metrized graph with strictly positive exact edge lengths. Loop-free
// by construction (build_graph normalizes loops away); parallel edges are
// allowed. Each connected component carries a cusp label, constant on the
// component. Immutable after construction.
class MetrizedGraph {
public:
    struct Edge {
        int a, b;
        Rat length;
    };

    MetrizedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges,
                  std::vector<std::string> cusp_labels);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_.at(static_cast<size_t>(e)); }

    const std::string& vertex_name(int v) const { return names_.at(static_cast<size_t>(v)); }
    std::optional<int> vertex_by_name(const std::string& name) const;
    const std::string& cusp_of_vertex(int v) const { return cusps_.at(static_cast<size_t>(v)); }

    int component_count() const { return static_cast<int>(component_vertices_.size()); }
    int component_of(int v) const { return component_of_.at(static_cast<size_t>(v)); }
    int component_of_point(const GraphPoint& p) const;
    const std::vector<std::vector<int>>& component_vertices() const { return component_vertices_; }
    const std::vector<std::vector<int>>& component_edges() const { return component_edges_; }
    const std::string& cusp_of_component(int c) const;

    // Incident (edge, endpoint-is-a) pairs; parallel edges appear once each.
    const std::vector<std::pair<int, bool>>& incident(int v) const {
        return incident_.at(static_cast<size_t>(v));
    }
    int degree(int v) const { return static_cast<int>(incident(v).size()); }

    Rat total_length() const;

    // Throws InputError when the point does not lie on this graph.
    void check_point(const GraphPoint& p) const;

    // Structural equality: same vertex/edge layout, lengths and cusp labels.
    // Vertex names are presentation data and do not participate.
    bool same_shape(const MetrizedGraph& o) const;

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::string> cusps_;
    std::vector<std::vector<std::pair<int, bool>>> incident_;
    std::vector<int> component_of_;
    std::vector<std::vector<int>> component_vertices_;
    std::vector<std::vector<int>> component_edges_;
};

using GraphPtr = std::shared_ptr<const MetrizedGraph>;

// Finite Q-divisor: a finite map from graph points to nonzero rationals.
class GraphDivisor {
public:
    GraphDivisor() = default;

    void add(const GraphPoint& p, const Rat& coeff);
    Rat coeff(const GraphPoint& p) const;
    bool empty() const { return coeffs_.empty(); }
    size_t size() const { return coeffs_.size(); }

    Rat degree() const;
    Rat degree_on_component(const MetrizedGraph& g, int component) const;

    const std::map<GraphPoint, Rat>& terms() const { return coeffs_; }

    GraphDivisor& operator+=(const GraphDivisor& o);
    GraphDivisor& operator*=(const Rat& s);
    friend GraphDivisor operator+(GraphDivisor a, const GraphDivisor& b) { a += b; return a; }
    friend GraphDivisor operator*(const Rat& s, GraphDivisor d) { d *= s; return d; }
    friend bool operator==(const GraphDivisor& a, const GraphDivisor& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    std::map<GraphPoint, Rat> coeffs_;
};

// Input description for build_graph. Edges may include loops and zero-based
// vertex indices; cusp labels and names are optional.
struct GraphSpec {
    std::vector<std::string> names;                    // empty -> v0, v1, ...
    std::vector<std::string> cusps;                    // empty -> per-component c0, c1, ...
    int vertex_count = 0;                              // used when names is empty
    std::vector<std::tuple<int, int, Rat>> edges;
};

// Image of one input edge in the built graph: a chain of final edges oriented
// from the input edge's first endpoint, with the inserted interior vertices.
// Non-loop edges map to a single final edge; loops are split in three.
struct EdgeImage {
    std::vector<int> edges;
    std::vector<int> inner_vertices;
};

struct BuiltGraph {
    GraphPtr graph;
    std::vector<EdgeImage> input_edges;

    // Translates a point given on an input edge to the built graph.
    GraphPoint locate(int input_edge, const Rat& offset) const;
};

// Validates and normalizes a graph description. Throws InputError on
// nonpositive lengths, bad indices, or cusp labels varying on a component.
BuiltGraph build_graph(const GraphSpec& spec);

// Convenience for loop-free specs with default names/cusps.
GraphPtr make_graph(int vertex_count, std::vector<std::tuple<int, int, Rat>> edges);

// Isometric refinement of a graph at interior edge points, together with the
// exact translation of points and divisors. Child vertices 0..n-1 coincide
// with the parent's; inserted vertices follow.
class Subdivision {
public:
    struct EdgeSplit {
        std::vector<Rat> cuts;            // strictly increasing, interior
        std::vector<int> child_edges;     // cuts.size()+1 edges, oriented along parent
        std::vector<int> child_vertices;  // cuts.size() inserted vertices
    };

    const GraphPtr& parent() const { return parent_; }
    const GraphPtr& child() const { return child_; }
    const EdgeSplit& split(int parent_edge) const { return splits_.at(static_cast<size_t>(parent_edge)); }

    GraphPoint map_point(const GraphPoint& p) const;
    GraphDivisor map_divisor(const GraphDivisor& d) const;

    // Inverse translation: where a child point sits on the parent.
    GraphPoint locate_in_parent(const GraphPoint& child_point) const;

private:
    friend Subdivision subdivide(const GraphPtr&, const std::vector<GraphPoint>&);
    GraphPtr parent_, child_;
    std::vector<EdgeSplit> splits_;
    std::vector<GraphPoint> child_vertex_origin_;  // per child vertex
    std::vector<std::pair<int, Rat>> child_edge_origin_;  // child edge -> (parent edge, base offset)
};

// Throws InputError if a point is a vertex, lies off the graph, or repeats.
Subdivision subdivide(const GraphPtr& g, const std::vector<GraphPoint>& pts);

// Graph with one edge deleted; vertex set and indices are preserved, edge
// indices above `e` shift down by one.
GraphPtr remove_edge(const MetrizedGraph& g, int e);

// One connected component extracted as a standalone graph, with the index
// translation in both directions.
struct ComponentView {
    GraphPtr graph;
    std::vector<int> vertex_to_parent;
    std::vector<int> edge_to_parent;
    std::vector<int> vertex_from_parent;  // -1 outside the component
    std::vector<int> edge_from_parent;

    GraphPoint to_local(const GraphPoint& parent_point) const;
    GraphPoint to_parent(const GraphPoint& local_point) const;
    GraphDivisor divisor_to_local(const GraphDivisor& d, const MetrizedGraph& parent,
                                  int component) const;
};

std::vector<ComponentView> split_components(const GraphPtr& g);

}  // namespace bdiv
