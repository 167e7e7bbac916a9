#pragma once

#include <stdexcept>
#include <string>

namespace bdiv {

// Invalid input: malformed documents, violated preconditions, unknown points.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant broke (a solver self-check failed). Never caused by input
// alone; indicates a bug.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bdiv
