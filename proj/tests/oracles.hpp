#pragma once

#include <random>
#include <vector>

#include "bdiv/model.hpp"
#include "bdiv/pwquad.hpp"
#include "bdiv/resistance.hpp"

// Test-side oracles and generators. The resistance oracles are independent
// routes kept apart from the library's linear solve on purpose.
namespace bdiv::testing {

using Rng = std::mt19937_64;

Rat random_rat(Rng& rng, long max_num = 6, long max_den = 4, bool allow_negative = true);
Rat random_positive_rat(Rng& rng, long max_num = 6, long max_den = 4);

// Connected loop-free multigraph on n vertices (spanning tree plus extras).
GraphPtr random_connected_graph(Rng& rng, int n, int extra_edges);

// Possibly disconnected; the input spec may contain loops and parallel edges.
GraphPtr random_graph(Rng& rng, int max_vertices);

// Cycle with the given segment lengths (at least one segment).
GraphPtr cycle_graph(const std::vector<Rat>& lengths);

// Kirchhoff determinant ratio det(L minus rows/cols {x,y}) / det(L minus
// row/col {x}), computed by fraction-free Bareiss elimination over the
// integers after clearing denominators.
ResistanceValue resistance_matrix_tree(const MetrizedGraph& g, int x, int y);

// Subset-enumeration oracle for small graphs: weighted spanning-tree sum
// against the separating-2-forest sum.
ResistanceValue resistance_enumeration(const MetrizedGraph& g, int x, int y);

// Random continuous piecewise quadratic.
PwQuad random_pwquad(Rng& rng, const GraphPtr& g, int max_breaks = 2);

// Random divisor of prescribed total degree per component, supported on
// vertices and edge-interior rational points.
GraphDivisor random_divisor_per_component_degree(Rng& rng, const GraphPtr& g, const Rat& degree);

// Random base model: one random connected fiber per cusp, multiplicities in
// 1..3, occasional loops and parallel edges.
ModelGraph random_model(Rng& rng, int cusps, int max_vertices_per_cusp);

}  // namespace bdiv::testing
