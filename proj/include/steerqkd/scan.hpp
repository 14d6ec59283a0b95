#pragma once

/**
 * @file
 * Parameter-grid scans over the state families and the table1 search.
 * Grid points are evaluated concurrently; rows always come out in nested
 * loop order, outermost range first.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "steerqkd/bell_weights.hpp"
#include "steerqkd/filtering.hpp"

namespace steerqkd {

/// One axis "name=lo:hi:step". Values are lo + i step for
/// i = 0 .. floor((hi - lo)/step + 1e-9).
struct ScanRange {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

/// @throws BadRange on malformed text or lo > hi or step <= 0.
ScanRange parse_range(const std::string &text);

struct ScanResult {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Header row then one line per row, comma separated, %.10g, '\n' endings.
void write_csv(const ScanResult &result, std::ostream &out);

/// Formats one value as %.10g.
std::string format_number(double value);

/**
 * Scans a family over the given ranges.
 *   werner        ranges {omega}
 *   gamma         ranges {q, alpha}
 *   bell_diagonal ranges {w1, w2, w3}; w4 = 1 - w1 - w2 - w3, points off
 *                 the simplex are skipped
 * @throws BadRange for unknown families, missing, repeated or unknown
 *         range names, or values outside the family's domain.
 */
ScanResult scan_family(const std::string &family,
                       const std::vector<ScanRange> &ranges);

namespace serial {
ScanResult scan_family(const std::string &family,
                       const std::vector<ScanRange> &ranges);
} // namespace serial

/// Simplex points (w1, w2, w3 on a grid of the given step) that are both
/// absolutely CHSH-local and useful.
std::vector<BellDiagonalParams> absolutely_local_useful_points(double step);

struct Table1Row {
    double alpha = 0.0;
    /// Infimum of the q-interval ending at 1 on which the filtered gamma
    /// state is useful; NaN when q = 1 itself is not useful.
    double q_start = 0.0;
    /// Same search for unfiltered F3 steerability, for comparison.
    double unfiltered_steerable_from = 0.0;
};

/**
 * For each alpha: walk the grid q = 1, 1 - q_step, ... down while the
 * predicate holds, then bisect the last grid cell to 1e-3.
 * @throws BadRange for q_step outside (0, 0.5] or alpha outside [0, pi/4].
 */
std::vector<Table1Row> table1(const FilterPair &filter,
                              const std::vector<double> &alphas, double q_step);

ScanResult table1_result(const std::vector<Table1Row> &rows);

} // namespace steerqkd
