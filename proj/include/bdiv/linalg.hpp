#pragma once

#include <vector>

#include "bdiv/rat.hpp"

namespace bdiv {

// Dense row-major matrix of exact rationals.
using RatMatrix = std::vector<std::vector<Rat>>;

// Solves A x = b by exact Gaussian elimination. A must be square and
// nonsingular; throws ConsistencyError otherwise.
std::vector<Rat> solve_linear(RatMatrix a, std::vector<Rat> b);

// Exact inverse by Gauss-Jordan elimination. Throws ConsistencyError on a
// singular matrix.
RatMatrix invert(RatMatrix a);

}  // namespace bdiv
