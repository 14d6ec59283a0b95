#pragma once

#include <array>

namespace steerqkd {

/// Mixing weights of a Bell-diagonal state, in the fixed order
/// (psi-, phi+, phi-, psi+). The order is load-bearing for every
/// closed-form predicate over the weights.
struct BellDiagonalParams {
    double w1 = 1.0;
    double w2 = 0.0;
    double w3 = 0.0;
    double w4 = 0.0;

    std::array<double, 4> as_array() const { return {w1, w2, w3, w4}; }
};

/// @throws BadWeights unless every weight is in [0,1] and they sum to 1
/// (both within 1e-10).
void validate(const BellDiagonalParams &p);

} // namespace steerqkd
