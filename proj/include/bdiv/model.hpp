#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdiv/linalg.hpp"
#include "bdiv/pwquad.hpp"

namespace bdiv {

// Q-valued function on the vertices of a model.
using VertexFunction = std::vector<Rat>;
// Vertical divisor: coefficient a(y) per vertex.
using VerticalDivisor = std::vector<Rat>;

class ModelGraph;

// Result of a blow-up: the new model plus the indices it created.
struct BlowUpResult;

// Dual graph of a semistable model. Vertices carry multiplicities and cusp
// labels; edges are boundary double points; the induced skeleton gives the
// edge between multiplicities m, n length 1/mn. A model remembers its base
// skeleton and the position of every vertex on it, so blow-up towers stay
// exactly located. Immutable: blow-ups return new models.
class ModelGraph {
public:
    struct Vertex {
        std::string name;
        long mult = 1;
        std::string cusp;
    };

    enum class BlowUpKind { Edge, SmoothPoint };
    struct Provenance {
        BlowUpKind kind;
        int parent_vertex_count;
        int a, b;  // edge endpoints, or (vertex, -1) for a smooth point
    };

    // Builds a base model. Cusp labels may be empty (one per component is
    // assigned); per cusp the vertex set must be nonempty and connected, and
    // edges may not join different cusps. Loops are allowed.
    static ModelGraph base(std::vector<Vertex> vertices, std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Vertex& vertex(int v) const { return verts_.at(static_cast<size_t>(v)); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    long mult(int v) const { return vertex(v).mult; }

    bool essential() const { return essential_; }
    long tower_depth() const { return depth_; }
    int base_vertex_count() const { return base_vertex_count_; }
    bool is_base_vertex(int v) const { return v < base_vertex_count_; }

    // The base skeleton (shared along the whole tower) and vertex positions.
    const GraphPtr& base_skeleton() const { return skel_; }
    const GraphPoint& position(int v) const { return pos_.at(static_cast<size_t>(v)); }

    // Skeleton length of a model edge: 1/(v(a) v(b)).
    Rat edge_length(int e) const;

    // The model's own metrized graph (isometric to the base skeleton plus any
    // contracted pendant segments), built from the multiplicities.
    GraphPtr own_skeleton() const;

    std::vector<std::string> cusp_names() const;  // in first-vertex order
    std::vector<int> cusp_vertex_list(const std::string& cusp) const;

    // Blow up the boundary double point e = (x, y): the exceptional vertex z
    // has multiplicity v(x) + v(y) and replaces e by x-z and z-y. An isometry
    // on skeleta.
    BlowUpResult blow_up_edge(int e) const;

    // Blow up a smooth boundary point on component x: pendant vertex z with
    // v(z) = v(x), retracting to x. Leaves the essential category.
    BlowUpResult blow_up_smooth_point(int x) const;

    const std::optional<Provenance>& provenance() const { return provenance_; }

    // True when this model was produced from `ancestor` by blow-ups.
    bool extends(const ModelGraph& ancestor) const;

    // Affine pieces on the base skeleton induced by interpolating from value
    // va at edge e's first endpoint to vb at its second. Empty for the
    // pendant edges of smooth-point blow-ups (they retract to a point).
    std::vector<std::pair<int, PwQuad::Piece>> edge_affine_pieces(int e, const Rat& va,
                                                                  const Rat& vb) const;

private:
    std::vector<Vertex> verts_;
    std::vector<std::pair<int, int>> edges_;
    bool essential_ = true;
    int base_vertex_count_ = 0;
    long depth_ = 0;
    std::optional<Provenance> provenance_;

    GraphPtr skel_;
    std::vector<GraphPoint> pos_;

    // Image of a model edge on the base skeleton: a chain of oriented
    // sub-intervals (t0 > t1 runs backwards), or a point retraction for the
    // pendant edges created by smooth-point blow-ups.
    struct Seg {
        int edge;
        Rat t0, t1;
    };
    struct Trace {
        bool on_skeleton = true;
        std::vector<Seg> segs;
        GraphPoint retract;
    };
    std::vector<Trace> traces_;

    GraphPoint walk(const Trace& tr, const Rat& s) const;
    std::pair<Trace, Trace> split_trace(const Trace& tr, const Rat& s) const;
};

struct BlowUpResult {
    ModelGraph model;
    int new_vertex = -1;
    std::vector<int> new_edges;
};

// The normalized function y -> a(y)/v(y) of a vertical divisor.
VertexFunction divisor_to_function(const ModelGraph& m, const VerticalDivisor& d);

// Pullback of a vertex function along the recorded blow-up that produced
// `child`: interpolation for an edge blow-up, extension by the center's value
// for a smooth-point blow-up.
VertexFunction pullback_function(const ModelGraph& child, const VertexFunction& on_parent);

// Pushforward (restriction to the parent's vertices).
VertexFunction pushforward_function(const ModelGraph& child, const VertexFunction& on_child);

// Intersection matrix of one cusp fiber: off-diagonal entries count edges,
// diagonal entries solve the fiber relation sum_y v(y) (x.y) = 0.
RatMatrix intersection_matrix(const ModelGraph& m, const std::string& cusp);

// sum_{x,y} a(x) b(y) (x.y) over all cusps.
Rat vertical_pairing(const ModelGraph& m, const VerticalDivisor& a, const VerticalDivisor& b);

// sum_{x,y} g1(x) g2(y) v(x) v(y) (x.y); reduces to -g1^T Q g2 on simple
// fibers, with Q the weighted Laplacian of the skeleton.
Rat discrete_pairing_sum(const ModelGraph& m, const VertexFunction& g1, const VertexFunction& g2);
Rat discrete_pairing_sum_on_cusp(const ModelGraph& m, const VertexFunction& g1,
                                 const VertexFunction& g2, const std::string& cusp);

// Piecewise-affine function on the base skeleton interpolating the given
// vertex values along every model edge. Requires an essential model.
PwQuad interpolate_on_skeleton(const ModelGraph& m, const VertexFunction& values);

}  // namespace bdiv
