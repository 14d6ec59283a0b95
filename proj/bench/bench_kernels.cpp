// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count; both variants compute identical results.

#include <benchmark/benchmark.h>

#include <numeric>

#include "steerqkd/families.hpp"
#include "steerqkd/filtering.hpp"
#include "steerqkd/protocol.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/scan.hpp"

using namespace steerqkd;

namespace {

const Vec3 kDiagonal(-0.7, 0.4, 0.2);

void BM_MubOracleSerial(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::brute_force_qber_min(kDiagonal));
    }
}

void BM_MubOracleParallel(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_qber_min(kDiagonal));
    }
}

void BM_FilterSearchSerial(benchmark::State &state) {
    const DensityMatrix rho = make_gamma({0.6, 0.7});
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::filter_search(rho, 0.02));
    }
}

void BM_FilterSearchParallel(benchmark::State &state) {
    const DensityMatrix rho = make_gamma({0.6, 0.7});
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter_search(rho, 0.02));
    }
}

std::vector<ScanRange> gamma_grid() {
    return {parse_range("q=0:1:0.01"), parse_range("alpha=0:0.78:0.01")};
}

void BM_GammaScanSerial(benchmark::State &state) {
    const auto ranges = gamma_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::scan_family("gamma", ranges));
    }
}

void BM_GammaScanParallel(benchmark::State &state) {
    const auto ranges = gamma_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan_family("gamma", ranges));
    }
}

std::vector<std::uint64_t> seeds() {
    std::vector<std::uint64_t> s(8);
    std::iota(s.begin(), s.end(), 1);
    return s;
}

void BM_ProtocolBatchSerial(benchmark::State &state) {
    ProtocolConfig cfg;
    cfg.rounds = 100000;
    const DensityMatrix rho = make_werner({0.8});
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::run_protocol_batch(rho, cfg, seeds()));
    }
}

void BM_ProtocolBatchParallel(benchmark::State &state) {
    ProtocolConfig cfg;
    cfg.rounds = 100000;
    const DensityMatrix rho = make_werner({0.8});
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_protocol_batch(rho, cfg, seeds()));
    }
}

} // namespace

BENCHMARK(BM_MubOracleSerial);
BENCHMARK(BM_MubOracleParallel);
BENCHMARK(BM_FilterSearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterSearchParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GammaScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GammaScanParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProtocolBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProtocolBatchParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
