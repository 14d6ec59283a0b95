#pragma once

/**
 * @file
 * Generators for the Bell-diagonal, Werner and gamma families together
 * with their closed-form correlation tensors and verdict predicates.
 */

#include "steerqkd/bell_weights.hpp"
#include "steerqkd/qstate.hpp"

namespace steerqkd {

/// omega |psi-><psi-| + (1 - omega) I/4, omega in [0, 1].
struct WernerParams {
    double omega = 1.0;
};

/// q |phi><phi| + (1 - q)|00><00| with |phi> = cos(alpha)|10> + sin(alpha)|01>,
/// q in [0, 1], alpha in [0, pi/4].
struct GammaParams {
    double q = 1.0;
    double alpha = 0.0;
};

enum class BellState { PsiMinus, PhiPlus, PhiMinus, PsiPlus };

Eigen::Vector4cd bell_vector(BellState which);

/// @throws BadParam
void validate(const WernerParams &p);
/// @throws BadParam
void validate(const GammaParams &p);

/// @throws BadWeights
DensityMatrix make_bell_diagonal(const BellDiagonalParams &p);
/// @throws BadParam
DensityMatrix make_werner(const WernerParams &p);
/// @throws BadParam
DensityMatrix make_gamma(const GammaParams &p);

/// Werner state as Bell-diagonal weights ((1+3w)/4, (1-w)/4 x 3).
BellDiagonalParams werner_weights(const WernerParams &p);

/**
 * Correlation tensor of a Bell-diagonal state under the sigma = (X, Y, Z)
 * convention: diag(1 - 2(w1 + w3), 1 - 2(w1 + w2), 1 - 2(w1 + w4)).
 */
Mat3 bell_diagonal_tensor(const BellDiagonalParams &p);

/// The weight-space tensor diag(1-2(w1+w3), 1-2(w2+w3), 1-2(w1+w2)). It has
/// the same magnitudes as bell_diagonal_tensor but the opposite
/// determinant sign, so it matches the physical tensor up to one sign flip.
Mat3 bell_diagonal_tensor_weight_form(const BellDiagonalParams &p);

/// diag(q sin 2a, q sin 2a, 1 - 2q).
Mat3 gamma_tensor(const GammaParams &p);

struct FamilyVerdicts {
    bool steerable = false;
    bool useful = false;
};

/// Steerable iff 2 q^2 sin^2 2a + (1 - 2q)^2 > 1;
/// useful iff 2 q sin 2a + |1 - 2q| > sqrt 3.
FamilyVerdicts gamma_predicates(const GammaParams &p);

/// Steerable via belldiag_f3_steerable; useful iff the three pair terms
/// |1 - 2(w_i + w_j)|, i < j <= 3, sum to more than sqrt 3.
FamilyVerdicts belldiag_predicates(const BellDiagonalParams &p);

} // namespace steerqkd
