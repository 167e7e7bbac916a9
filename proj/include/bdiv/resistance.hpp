#pragma once

#include <vector>

#include "bdiv/graph.hpp"

namespace bdiv {

// Effective resistance between two points; infinite exactly when they lie in
// different connected components.
struct ResistanceValue {
    bool infinite = false;
    Rat value;

    static ResistanceValue finite(Rat v) { return {false, std::move(v)}; }
    static ResistanceValue inf() { return {true, Rat(0)}; }

    friend bool operator==(const ResistanceValue& a, const ResistanceValue& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
};

// Electrical-network resistance with each edge a resistor of resistance equal
// to its length. Exact, via a grounded weighted-Laplacian solve.
ResistanceValue effective_resistance(const GraphPtr& g, const GraphPoint& x, const GraphPoint& y);

// Resistance between the endpoints of every edge, all edges present. One
// grounded-Laplacian inversion per component.
std::vector<Rat> edge_endpoint_resistances(const MetrizedGraph& g);

// First Betti number E - V + 1 of each connected component.
std::vector<long> betti_numbers(const MetrizedGraph& g);

}  // namespace bdiv
