#pragma once

/**
 * @file
 * Three-setting CJWR steering functional, its closed-form maximum over
 * measurement triads, the Horodecki CHSH bound for comparison, and the
 * weight-space predicates for Bell-diagonal states.
 */

#include "steerqkd/bell_weights.hpp"
#include "steerqkd/qstate.hpp"

namespace steerqkd {

struct SteeringVerdict {
    double f3_bound = 0.0;
    bool steerable = false;  ///< f3_bound > 1
    double chsh_bound = 0.0; ///< maximal CHSH value 2 sqrt(s1^2 + s2^2)
    bool chsh_violating = false;
};

/// (1/sqrt 3) |sum_l <A_l (x) B_l>| with <A_l (x) B_l> = a_l . W b_l.
double cjwr_functional(const DensityMatrix &rho, const MeasurementTriad &alice,
                       const MeasurementTriad &bob);

/// Same functional from an already decomposed state.
double cjwr_functional(const BlochForm &bf, const MeasurementTriad &alice,
                       const MeasurementTriad &bob);

/// Functional with Alice's settings relaxed to arbitrary unit vectors
/// (Bob's stay orthonormal). This is the setting family over which the
/// closed form sqrt(Tr W^T W) is attained.
/// @throws InvalidDirection if an Alice direction is not unit length.
double cjwr_functional(const BlochForm &bf, const std::array<Vec3, 3> &alice,
                       const MeasurementTriad &bob);

/// sqrt(Tr W^T W): the maximum of the functional over Alice unit vectors and
/// Bob orthonormal triads.
double f3_bound(const TensorSpectrum &spec);

bool is_f3_steerable(const TensorSpectrum &spec);

double chsh_bound(const TensorSpectrum &spec);
bool is_chsh_violating(const TensorSpectrum &spec);

SteeringVerdict steering_verdict(const TensorSpectrum &spec);

struct CjwrSettings {
    std::array<Vec3, 3> alice;
    MeasurementTriad bob;
};

/**
 * Settings attaining f3_bound. Bob's triad is rotated so that
 * |W b_l| is the same for all three directions (always possible for a
 * symmetric PSD W^T W); Alice then measures along W b_l / |W b_l|.
 */
CjwrSettings optimal_cjwr_settings(const BlochForm &bf);

/// Orthonormal triad pair maximizing the functional when both parties are
/// restricted to orthonormal triads: singular vectors of W. The maximum is
/// (s1 + s2 + s3) / sqrt 3, which equals f3_bound only for isotropic W.
std::pair<MeasurementTriad, MeasurementTriad>
aligned_singular_triads(const BlochForm &bf);

/**
 * Radicand of the weight-space steering test,
 * 8 (sum_{1<=i<=j<=3} w_i w_j + w_4) - 5, which equals Tr(W^T W).
 */
double belldiag_f3_radicand(const BellDiagonalParams &w);

/// sqrt(max(radicand, 0)) > 1.
/// @throws BadWeights
bool belldiag_f3_steerable(const BellDiagonalParams &w);

/// Max over cyclic (i,j,k) of
/// 1 - 4(w_i - w_i^2 - w_i w_j - w_i w_k) - 2(w_j + w_k - w_j^2 - w_k^2).
double belldiag_absolute_locality_max(const BellDiagonalParams &w);

/// belldiag_absolute_locality_max(w) <= 1/2.
/// @throws BadWeights
bool belldiag_absolutely_chsh_local(const BellDiagonalParams &w);

} // namespace steerqkd
