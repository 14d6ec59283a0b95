#pragma once

/**
 * @file
 * Command-line front end. State files are JSON objects holding exactly one
 * of
 *   "matrix": 4 rows of 4 [re, im] pairs, row-major, or
 *   "family": "bell_diagonal" | "werner" | "gamma" with "params":
 *             {w1, w2, w3, w4} | {omega} | {q, alpha}.
 * Bell-diagonal weights follow the order (psi-, phi+, phi-, psi+).
 */

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steerqkd/filtering.hpp"
#include "steerqkd/qstate.hpp"
#include "steerqkd/scan.hpp"

namespace steerqkd::cli {

/// @throws ParseError with line/column or field diagnostics; InvalidState
///         and family errors for well-formed but illegal content.
DensityMatrix parse_state(const std::string &text,
                          const std::string &source = "<input>");

/// @throws ParseError when the file cannot be read.
DensityMatrix load_state(const std::string &path);

/// JSON analysis report.
std::string cmd_analyze(const DensityMatrix &rho);

/// Runs the scan and writes CSV to out_path.
/// @throws BadRange, ParseError (unwritable output).
ScanResult cmd_scan(const std::string &family,
                    const std::vector<std::string> &ranges,
                    const std::string &out_path);

struct SimulateOptions {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    double test_fraction = 0.1;
    std::optional<FilterPair> filter;
    bool emit_keys = false;
};

/// JSON report with a config echo. Triads are the aligned singular triads
/// of the state that is measured (the filtered state when filtering).
std::string cmd_simulate(const DensityMatrix &rho, const std::string &source,
                         const SimulateOptions &opts);

/// CSV text of table1().
std::string cmd_table1(double eps1, double eps2, const std::vector<double> &alphas,
                       double q_step);

/// "a,b,c" -> {a, b, c}.
/// @throws ParseError
std::vector<double> parse_number_list(const std::string &text);

/// Full command line. Returns the process exit code: 0 success,
/// 2 parse or validation error, 3 numerical failure.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace steerqkd::cli
