#pragma once

#include <stdexcept>

namespace waterslide {

/// Thrown when a requested quantity does not exist in the given regime,
/// e.g. a target error probability that no transmit power can reach, or a
/// finite-blocklength bound whose feasible set of test channels is empty.
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace waterslide
