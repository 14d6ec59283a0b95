#pragma once

/**
 * @file
 * Quantum bit error rate for the three-MUB protocol: the per-setting
 * formula, its closed-form minimum over settings, an exhaustive oracle over
 * the six signed Pauli axes, the critical rate of F3-unsteerable states,
 * usefulness classification and the key-rate formula.
 */

#include <array>
#include <optional>

#include "steerqkd/qstate.hpp"

namespace steerqkd {

struct UsefulnessVerdict {
    double q_min = 0.5;
    bool useful = false; ///< q_min < critical_rate, i.e. s1 + s2 + s3 > sqrt 3
    double critical_rate = 0.0;
    double margin = 0.0; ///< critical_rate - q_min
};

/// (1/6)(3 - sum_i u_i . W v_i).
double qber_three_settings(const BlochForm &bf, const MeasurementTriad &alice,
                           const MeasurementTriad &bob);

/// (1/4)(2 - u_1 . W v_1 - u_2 . W v_2) for two unit-vector settings each.
/// @throws InvalidDirection
double qber_two_settings(const BlochForm &bf, const std::array<Vec3, 2> &alice,
                         const std::array<Vec3, 2> &bob);

/// (1/6)(3 - (s1 + s2 + s3)).
double qber_min(const TensorSpectrum &spec);

/// (1/4)(2 - (s1 + s2)), the two-setting minimum.
double qber_min_two_settings(const TensorSpectrum &spec);

/// (3 - sqrt 3)/6: the least QBER any F3-unsteerable state can reach.
double critical_qber();

UsefulnessVerdict classify_usefulness(const TensorSpectrum &spec);

/// Signed Pauli axes m_1..m_6 = +z, -z, +x, -x, +y, -y.
const std::array<Vec3, 6> &signed_mub_axes();

/// Outcome of the exhaustive MUB search. Axis entries are 1-based indices
/// into signed_mub_axes(), one per measurement slot.
struct MubSearchResult {
    double q_min = 0.5;
    std::array<int, 3> alice_axes{};
    std::array<int, 3> bob_axes{};
};

/**
 * Enumerates every assignment of the six signed axes to each party's three
 * MUB slots (3! orders x 2^3 signs = 48 per party, 2304 pairs) and returns
 * the smallest (1/6)(3 - sum u_i . T v_i) for T = diag(t). Ties resolve to
 * the first pair in enumeration order. Runs over Alice's 48 choices in
 * parallel; the result is identical to serial::brute_force_qber_min.
 */
MubSearchResult brute_force_qber_min(const Vec3 &diagonal);
MubSearchResult brute_force_qber_min(const TensorSpectrum &spec);

namespace serial {
MubSearchResult brute_force_qber_min(const Vec3 &diagonal);
} // namespace serial

/// Half-open interval (low, high].
struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/**
 * Usefulness check for an unknown state from an observed CJWR value V and
 * two known correlation-tensor magnitudes.
 */
struct ViolationCertificate {
    /// sqrt(V^2 - l22^2 - l33^2); NaN when the radicand is negative.
    double implied_lam11 = 0.0;
    /// The lam11 values in (sqrt 3 - l22 - l33, 1] certifying usefulness,
    /// present only when implied_lam11 lies inside it.
    std::optional<Interval> region;
    /// The asymmetric chain sqrt 3 - lam11 - l22 < sqrt(...) <= 1
    /// evaluated at lam11 = implied_lam11. Kept for comparison.
    bool literal_chain_holds = false;
};

/// @throws BadViolation unless V in (0, sqrt 3] and lam22, lam33 in [0, 1].
ViolationCertificate useful_region_given_violation(double V, double lam22,
                                                   double lam33);

/// 1 + 2Q log2 Q + 2(1 - 2Q) log2(1 - Q), with Q log2 Q -> 0 at Q = 0.
/// @throws BadQber unless Q in [0, 0.5].
double min_secure_key_rate(double Q);

} // namespace steerqkd
