#pragma once

#include "bdiv/measure.hpp"

namespace bdiv {

// Admissible data on a connected metrized graph: a divisor K of degree
// 2h - 2, the parameter h != 0, and the admissible measure
// mu = (delta_K + 2 mu_can) / 2h of total mass one. In the geometric case
// (K the restriction of the relative dualizing sheaf, h the fiber genus) mu
// is a positive measure; arbitrary valid K is accepted.
struct AdmissibleData {
    GraphPtr graph;
    GraphDivisor K;
    Rat h;
    GraphMeasure mu;
};

// Validates the inputs and assembles mu. Throws InputError on h = 0, a
// disconnected graph (solve per component instead), or deg K != 2h - 2.
AdmissibleData admissible_measure(const GraphPtr& g, GraphDivisor K, const Rat& h);

// The Green's function g with Delta_y g = delta_x - mu and integral of g
// against mu equal to zero. Solved exactly: subdivide until x and the atoms
// of mu are vertices, take g quadratic per edge with g'' matching the density
// of mu, solve the Kirchhoff conditions for the vertex values, and pin the
// constant by the normalization.
PwQuad green(const AdmissibleData& data, const GraphPoint& x);

// The constant c with c + g(y,y) + g(K,y) = 0, evaluated at several probe
// points; disagreement raises ConsistencyError.
Rat zhang_constant(const AdmissibleData& data);

// The diagonal y -> g(y,y) as a piecewise quadratic, by fitting the unique
// quadratic through three diagonal samples per edge and validating a fourth
// sample exactly.
PwQuad diagonal_green(const AdmissibleData& data);

}  // namespace bdiv
