#pragma once

/**
 * @file
 * Seeded Monte Carlo run of the entanglement-based three-MUB protocol:
 * optional heralded filtering, independent uniform basis choices, Born-rule
 * outcomes, sifting, a disclosed test prefix and correlator estimates.
 *
 * Random stream (std::mt19937_64 seeded with cfg.seed), per round:
 *   1. filtering only: u < p_succ heralds success, otherwise the round is
 *      dropped and consumes nothing further;
 *   2. Alice's basis floor(3u), then Bob's basis floor(3u);
 *   3. one u for the outcome pair by inverse CDF over (00, 01, 10, 11).
 * Each u is (x >> 11) * 2^-53 for one 64-bit draw x.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "steerqkd/filtering.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/qstate.hpp"
#include "steerqkd/steering.hpp"

namespace steerqkd {

struct ProtocolConfig {
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;
    MeasurementTriad alice_triad = MeasurementTriad::coordinate();
    MeasurementTriad bob_triad = MeasurementTriad::coordinate();
    /// Fraction of sifted rounds disclosed for error estimation, in (0, 1).
    double test_fraction = 0.1;
    std::optional<FilterPair> filter;
};

/// @throws BadParam
void validate(const ProtocolConfig &cfg);

struct RoundRecord {
    int alice_basis = 0;
    int bob_basis = 0;
    int alice_outcome = 0;
    int bob_outcome = 0;
    bool kept = true;
    bool sifted = false;
};

struct SimulationReport {
    std::uint64_t rounds = 0;
    std::uint64_t kept_count = 0;
    std::uint64_t sifted_count = 0;
    std::uint64_t disclosed_count = 0;
    std::uint64_t disclosed_mismatches = 0;
    double empirical_qber = 0.0;
    double empirical_cjwr = 0.0;
    /// Mean of (-1)^(a+b) over rounds with both parties in basis l.
    std::array<double, 3> correlators{};
    std::array<std::uint64_t, 3> correlator_counts{};
    std::vector<std::uint8_t> raw_key_alice;
    std::vector<std::uint8_t> raw_key_bob;
    /// kept_count / rounds; present only when filtering.
    std::optional<double> p_succ_empirical;

    bool operator==(const SimulationReport &) const = default;
};

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(std::mt19937_64 &rng);

/// Aligned singular triads of W; they attain qber_min for the state.
std::pair<MeasurementTriad, MeasurementTriad>
optimal_triads(const DensityMatrix &rho);

/**
 * @param trace receives one record per round when non-null.
 * @throws FilterAnnihilates, DegenerateConfig (no sifted round to disclose).
 */
SimulationReport run_protocol(const DensityMatrix &rho, const ProtocolConfig &cfg,
                              std::vector<RoundRecord> *trace = nullptr);

/// One run per seed, cfg.seed overridden. Seeds run concurrently; each
/// report equals the sequential one.
std::vector<SimulationReport>
run_protocol_batch(const DensityMatrix &rho, const ProtocolConfig &cfg,
                   const std::vector<std::uint64_t> &seeds);

namespace serial {
std::vector<SimulationReport>
run_protocol_batch(const DensityMatrix &rho, const ProtocolConfig &cfg,
                   const std::vector<std::uint64_t> &seeds);
} // namespace serial

struct UntrustedSourceDemo {
    SteeringVerdict steering;
    UsefulnessVerdict usefulness;
    bool absolutely_local = false;
    SimulationReport report;
};

/// Analytic verdicts for the Bell-diagonal source plus one simulated run.
/// @throws BadWeights and anything run_protocol throws.
UntrustedSourceDemo untrusted_source_demo(const BellDiagonalParams &w,
                                          const ProtocolConfig &cfg);

} // namespace steerqkd
