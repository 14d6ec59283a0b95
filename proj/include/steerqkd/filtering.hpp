#pragma once

/**
 * @file
 * Local filtering M = diag(eps, 1) on each qubit, heralded success
 * probability and usefulness of the post-filter state.
 */

#include <array>
#include <vector>

#include "steerqkd/qstate.hpp"

namespace steerqkd {

/// Filter strengths for Alice (eps1) and Bob (eps2), each in [0, 1].
struct FilterPair {
    double eps1 = 1.0;
    double eps2 = 1.0;
};

/// @throws BadParam
void validate(const FilterPair &f);

/// eps|0><0| + |1><1|.
Matrix2c filter_operator(double eps);

/// sqrt(1 - eps^2)|0><0|, the failure branch of filter_operator(eps).
Matrix2c filter_complement(double eps);

struct FilterOutcome {
    DensityMatrix filtered_state = DensityMatrix::maximally_mixed();
    double p_succ = 0.0;
    /// qber_min of the filtered state.
    double q_min_filtered = 0.5;
    /// p_succ times qber_min of the unfiltered state.
    double literal_keyn_product = 0.0;
};

inline constexpr double kMinSuccessProbability = 1e-12;

/// @throws FilterAnnihilates if p_succ < kMinSuccessProbability.
FilterOutcome apply_local_filters(const DensityMatrix &rho, const FilterPair &f);

/// Probabilities of the four heralded branches (A success/fail x B
/// success/fail) in the order SS, SF, FS, FF. They sum to 1.
std::array<double, 4> branch_probabilities(const DensityMatrix &rho,
                                           const FilterPair &f);

/// q_min_filtered < critical_qber().
bool modified_protocol_useful(const DensityMatrix &rho, const FilterPair &f);

/// Grid values k * step for k = 1 .. floor(1/step), the points of (0, 1].
/// @throws BadParam unless step is in (0, 0.5].
std::vector<double> filter_grid(double step);

/// Every grid pair (eps1 outer, eps2 inner, both ascending) for which
/// modified_protocol_useful holds. Points where the filter annihilates the
/// state are skipped.
std::vector<FilterPair> filter_search(const DensityMatrix &rho, double grid_step);

namespace serial {
std::vector<FilterPair> filter_search(const DensityMatrix &rho, double grid_step);
} // namespace serial

} // namespace steerqkd
