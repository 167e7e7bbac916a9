#pragma once

#include "bdiv/measure.hpp"

namespace bdiv {

// Divisor with coefficient deg(x) - 2 at every vertex; supported on points of
// degree != 2. Degree is 2 b1 - 2 on each component.
GraphDivisor canonical_divisor(const MetrizedGraph& g);

// The canonical measure: -1/2 delta_{K_can} plus density 1/(l(e) + r(e)) per
// edge, where r(e) is the effective resistance of the endpoints with e
// removed (its parallels stay). Bridges contribute density zero. Total mass
// is one on every component.
GraphMeasure canonical_measure(const GraphPtr& g);

}  // namespace bdiv
