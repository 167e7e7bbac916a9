#include "bdiv/canonical.hpp"

#include "bdiv/resistance.hpp"

namespace bdiv {

GraphDivisor canonical_divisor(const MetrizedGraph& g) {
    GraphDivisor k;
    for (int v = 0; v < g.vertex_count(); ++v)
        k.add(GraphPoint::vertex(v), Rat(g.degree(v) - 2));
    return k;
}

GraphMeasure canonical_measure(const GraphPtr& g) {
    GraphDivisor dirac = canonical_divisor(*g);
    dirac *= Rat(-1, 2);

    // With R the full-graph resistance across e and l its length, the network
    // without e has resistance r = l R / (l - R), so 1/(l + r) = (l - R)/l^2;
    // bridges have R = l and get density zero.
    std::vector<Rat> full = edge_endpoint_resistances(*g);
    std::vector<Rat> density(static_cast<size_t>(g->edge_count()));
    for (int e = 0; e < g->edge_count(); ++e) {
        const Rat& l = g->edge(e).length;
        density[static_cast<size_t>(e)] = (l - full[static_cast<size_t>(e)]) / (l * l);
    }
    GraphMeasure out = GraphMeasure::from_edge_densities(g, std::move(density));
    return out + GraphMeasure::from_divisor(g, std::move(dirac));
}

}  // namespace bdiv
