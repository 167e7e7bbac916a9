#pragma once

#include <vector>

#include "bdiv/pwquad.hpp"

namespace bdiv {

// Signed measure of the class handled throughout: finitely many Dirac masses
// at rational points plus a piecewise-constant density per edge. Stored in
// canonical form (zero Diracs dropped, adjacent equal densities merged).
class GraphMeasure {
public:
    struct Segment {
        Rat lo, hi, density;
        friend bool operator==(const Segment& x, const Segment& y) {
            return x.lo == y.lo && x.hi == y.hi && x.density == y.density;
        }
    };

    GraphMeasure(GraphPtr graph, GraphDivisor dirac, std::vector<std::vector<Segment>> density);

    static GraphMeasure zero(GraphPtr graph);
    static GraphMeasure from_divisor(GraphPtr graph, GraphDivisor dirac);
    // Density constant per edge, one value per edge, no atoms.
    static GraphMeasure from_edge_densities(GraphPtr graph, std::vector<Rat> density);

    const GraphPtr& graph() const { return graph_; }
    const GraphDivisor& dirac() const { return dirac_; }
    const std::vector<Segment>& density(int edge) const {
        return density_.at(static_cast<size_t>(edge));
    }

    Rat total_mass() const;
    Rat component_mass(int component) const;

    bool is_positive() const;  // all Dirac coefficients and densities >= 0

    GraphMeasure& operator+=(const GraphMeasure& o);
    GraphMeasure& operator-=(const GraphMeasure& o);
    GraphMeasure& operator*=(const Rat& s);
    friend GraphMeasure operator+(GraphMeasure a, const GraphMeasure& b) { a += b; return a; }
    friend GraphMeasure operator-(GraphMeasure a, const GraphMeasure& b) { a -= b; return a; }
    friend GraphMeasure operator*(const Rat& s, GraphMeasure m) { m *= s; return m; }

    friend bool operator==(const GraphMeasure& a, const GraphMeasure& b);

private:
    GraphPtr graph_;
    GraphDivisor dirac_;
    std::vector<std::vector<Segment>> density_;

    void validate() const;
    void canonicalize();
};

// The hybrid Laplacian: Delta f = -f'' dx - sum_p (sum of outgoing slopes) delta_p.
// Total mass vanishes on every component.
GraphMeasure laplacian(const PwQuad& f);

// Exact integral of f against m; both must live on the same graph.
Rat integrate(const PwQuad& f, const GraphMeasure& m);

// Integral restricted to one connected component.
Rat integrate_on_component(const PwQuad& f, const GraphMeasure& m, int component);

// Transfer of a measure to the refined graph of a subdivision.
GraphMeasure push_measure(const Subdivision& sub, const GraphMeasure& m);

}  // namespace bdiv
