#include "steerqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "steerqkd/errors.hpp"
#include "steerqkd/families.hpp"

namespace steerqkd {

namespace {

using Cdf = std::array<double, 4>;

Cdf cumulative(const OutcomeDistribution &p) {
    Cdf c{};
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        acc += p[k];
        c[k] = acc;
    }
    return c;
}

int sample_outcome(const Cdf &c, double u) {
    for (int k = 0; k < 3; ++k) {
        if (u < c[k]) {
            return k;
        }
    }
    return 3;
}

int sample_basis(std::mt19937_64 &rng) {
    return std::min(2, static_cast<int>(3.0 * uniform_unit(rng)));
}

} // namespace

void validate(const ProtocolConfig &cfg) {
    if (cfg.rounds < 1) {
        throw BadParam("rounds must be at least 1");
    }
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        std::ostringstream msg;
        msg << "test_fraction must lie in (0, 1), got " << cfg.test_fraction;
        throw BadParam(msg.str());
    }
    if (cfg.filter) {
        validate(*cfg.filter);
    }
}

double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::pair<MeasurementTriad, MeasurementTriad>
optimal_triads(const DensityMatrix &rho) {
    return aligned_singular_triads(bloch_decompose(rho));
}

SimulationReport run_protocol(const DensityMatrix &rho, const ProtocolConfig &cfg,
                              std::vector<RoundRecord> *trace) {
    validate(cfg);
    DensityMatrix state = rho;
    double p_succ = 1.0;
    if (cfg.filter) {
        const FilterOutcome f = apply_local_filters(rho, *cfg.filter);
        state = f.filtered_state;
        p_succ = f.p_succ;
    }

    std::array<std::array<Cdf, 3>, 3> cdf{};
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            cdf[x][y] = cumulative(joint_outcome_distribution(
                state, cfg.alice_triad[x], cfg.bob_triad[y]));
        }
    }

    std::mt19937_64 rng(cfg.seed);
    SimulationReport rep;
    rep.rounds = cfg.rounds;
    std::array<std::int64_t, 3> corr_sum{};
    std::vector<std::uint8_t> sifted_a;
    std::vector<std::uint8_t> sifted_b;
    if (trace != nullptr) {
        trace->clear();
        trace->reserve(cfg.rounds);
    }

    for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
        RoundRecord rec;
        if (cfg.filter && !(uniform_unit(rng) < p_succ)) {
            rec.kept = false;
            if (trace != nullptr) {
                trace->push_back(rec);
            }
            continue;
        }
        ++rep.kept_count;
        rec.alice_basis = sample_basis(rng);
        rec.bob_basis = sample_basis(rng);
        const int ab = sample_outcome(cdf[rec.alice_basis][rec.bob_basis],
                                      uniform_unit(rng));
        rec.alice_outcome = ab >> 1;
        rec.bob_outcome = ab & 1;
        rec.sifted = rec.alice_basis == rec.bob_basis;
        if (rec.sifted) {
            const int l = rec.alice_basis;
            corr_sum[l] += rec.alice_outcome == rec.bob_outcome ? 1 : -1;
            ++rep.correlator_counts[l];
            sifted_a.push_back(static_cast<std::uint8_t>(rec.alice_outcome));
            sifted_b.push_back(static_cast<std::uint8_t>(rec.bob_outcome));
        }
        if (trace != nullptr) {
            trace->push_back(rec);
        }
    }

    rep.sifted_count = sifted_a.size();
    if (rep.sifted_count == 0) {
        std::ostringstream msg;
        msg << "no sifted round to disclose after " << cfg.rounds << " rounds";
        throw DegenerateConfig(msg.str());
    }
    const double share = cfg.test_fraction * static_cast<double>(rep.sifted_count);
    rep.disclosed_count = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(share - 1e-9)));
    for (std::uint64_t i = 0; i < rep.disclosed_count; ++i) {
        rep.disclosed_mismatches += sifted_a[i] != sifted_b[i] ? 1 : 0;
    }
    rep.empirical_qber = static_cast<double>(rep.disclosed_mismatches) /
                         static_cast<double>(rep.disclosed_count);
    rep.raw_key_alice.assign(sifted_a.begin() + rep.disclosed_count, sifted_a.end());
    rep.raw_key_bob.assign(sifted_b.begin() + rep.disclosed_count, sifted_b.end());

    double total = 0.0;
    for (int l = 0; l < 3; ++l) {
        const auto n = rep.correlator_counts[l];
        rep.correlators[l] =
            n > 0 ? static_cast<double>(corr_sum[l]) / static_cast<double>(n) : 0.0;
        total += rep.correlators[l];
    }
    rep.empirical_cjwr = std::abs(total) / std::sqrt(3.0);
    if (cfg.filter) {
        rep.p_succ_empirical = static_cast<double>(rep.kept_count) /
                               static_cast<double>(rep.rounds);
    }
    return rep;
}

std::vector<SimulationReport>
serial::run_protocol_batch(const DensityMatrix &rho, const ProtocolConfig &cfg,
                           const std::vector<std::uint64_t> &seeds) {
    std::vector<SimulationReport> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) {
        ProtocolConfig c = cfg;
        c.seed = seed;
        out.push_back(run_protocol(rho, c));
    }
    return out;
}

std::vector<SimulationReport>
run_protocol_batch(const DensityMatrix &rho, const ProtocolConfig &cfg,
                   const std::vector<std::uint64_t> &seeds) {
    validate(cfg);
    const auto n = static_cast<std::int64_t>(seeds.size());
    std::vector<SimulationReport> out(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            ProtocolConfig c = cfg;
            c.seed = seeds[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = run_protocol(rho, c);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

UntrustedSourceDemo untrusted_source_demo(const BellDiagonalParams &w,
                                          const ProtocolConfig &cfg) {
    const DensityMatrix rho = make_bell_diagonal(w);
    const TensorSpectrum spec = tensor_spectrum(rho);
    UntrustedSourceDemo demo;
    demo.steering = steering_verdict(spec);
    demo.usefulness = classify_usefulness(spec);
    demo.absolutely_local = belldiag_absolutely_chsh_local(w);
    demo.report = run_protocol(rho, cfg);
    return demo;
}

} // namespace steerqkd
