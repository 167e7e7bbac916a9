#pragma once

#include <vector>

#include "bdiv/graph.hpp"

namespace bdiv {

// Continuous piecewise-quadratic function on a metrized graph. Each edge
// carries a partition of [0, length] with one quadratic a t^2 + b t + c per
// cell, in the edge's arclength coordinate; vertex values are stored
// explicitly so isolated vertices carry values too. Continuity across cell
// boundaries and at vertices is validated on construction.
class PwQuad {
public:
    struct Piece {
        Rat lo, hi;
        Rat a, b, c;

        Rat eval(const Rat& t) const { return (a * t + b) * t + c; }
        Rat slope(const Rat& t) const { return Rat(2) * a * t + b; }
        friend bool operator==(const Piece& x, const Piece& y) {
            return x.lo == y.lo && x.hi == y.hi && x.a == y.a && x.b == y.b && x.c == y.c;
        }
    };

    PwQuad(GraphPtr graph, std::vector<Rat> vertex_values,
           std::vector<std::vector<Piece>> edge_pieces);

    static PwQuad constant(GraphPtr graph, const Rat& value);
    // Piecewise-affine interpolation of the given vertex values.
    static PwQuad interpolate(GraphPtr graph, std::vector<Rat> vertex_values);

    const GraphPtr& graph() const { return graph_; }
    const std::vector<Rat>& vertex_values() const { return vertex_values_; }
    const std::vector<Piece>& pieces(int edge) const { return pieces_.at(static_cast<size_t>(edge)); }

    Rat operator()(const GraphPoint& p) const;
    Rat at_vertex(int v) const { return vertex_values_.at(static_cast<size_t>(v)); }
    // Sum of coeff * f(p) over the divisor.
    Rat on_divisor(const GraphDivisor& d) const;

    PwQuad& operator+=(const PwQuad& o);
    PwQuad& operator-=(const PwQuad& o);
    PwQuad& operator*=(const Rat& s);
    PwQuad& operator+=(const Rat& c);
    friend PwQuad operator+(PwQuad a, const PwQuad& b) { a += b; return a; }
    friend PwQuad operator-(PwQuad a, const PwQuad& b) { a -= b; return a; }
    friend PwQuad operator*(const Rat& s, PwQuad f) { f *= s; return f; }
    friend PwQuad operator+(PwQuad f, const Rat& c) { f += c; return f; }

    friend bool operator==(const PwQuad& a, const PwQuad& b);

private:
    GraphPtr graph_;
    std::vector<Rat> vertex_values_;
    std::vector<std::vector<Piece>> pieces_;

    void validate() const;
    void canonicalize();
};

// Transfers of functions across a subdivision, exact in both directions.
PwQuad push_function(const Subdivision& sub, const PwQuad& on_parent);
PwQuad pull_function(const Subdivision& sub, const PwQuad& on_child);

}  // namespace bdiv
