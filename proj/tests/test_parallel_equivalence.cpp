#include <doctest.h>

#include <numeric>

#include "steerqkd/families.hpp"
#include "steerqkd/filtering.hpp"
#include "steerqkd/protocol.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/scan.hpp"
#include "support/random_states.hpp"

using namespace steerqkd;
using namespace steerqkd::testing;

namespace {

bool same_pairs(const std::vector<FilterPair> &a, const std::vector<FilterPair> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].eps1 != b[i].eps1 || a[i].eps2 != b[i].eps2) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("MUB oracle: parallel equals serial including the argmin") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 500; ++i) {
        const Vec3 t(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
        const MubSearchResult p = brute_force_qber_min(t);
        const MubSearchResult s = serial::brute_force_qber_min(t);
        CHECK(p.q_min == s.q_min);
        CHECK(p.alice_axes == s.alice_axes);
        CHECK(p.bob_axes == s.bob_axes);
    }
    // Ties everywhere: the first pair in enumeration order wins.
    const MubSearchResult z = brute_force_qber_min(Vec3::Zero());
    CHECK(z.alice_axes == serial::brute_force_qber_min(Vec3::Zero()).alice_axes);
}

TEST_CASE("filter search: parallel equals serial") {
    std::mt19937_64 rng(72);
    for (int i = 0; i < 5; ++i) {
        const DensityMatrix rho = make_gamma(random_gamma(rng));
        CHECK(same_pairs(filter_search(rho, 0.05), serial::filter_search(rho, 0.05)));
    }
}

TEST_CASE("family scans: parallel equals serial") {
    const std::vector<ScanRange> g{parse_range("q=0:1:0.02"),
                                   parse_range("alpha=0:0.78:0.02")};
    const ScanResult a = scan_family("gamma", g);
    const ScanResult b = serial::scan_family("gamma", g);
    CHECK(a.header == b.header);
    CHECK(a.rows == b.rows);

    const std::vector<ScanRange> w{parse_range("w1=0:1:0.05"), parse_range("w2=0:1:0.05"),
                                   parse_range("w3=0:1:0.05")};
    CHECK(scan_family("bell_diagonal", w).rows ==
          serial::scan_family("bell_diagonal", w).rows);
}

TEST_CASE("protocol batch: parallel equals serial") {
    std::vector<std::uint64_t> seeds(8);
    std::iota(seeds.begin(), seeds.end(), 1);
    ProtocolConfig cfg;
    cfg.rounds = 20000;
    cfg.filter = FilterPair{0.5, 0.7};
    const DensityMatrix rho = make_werner({0.8});
    CHECK(run_protocol_batch(rho, cfg, seeds) == serial::run_protocol_batch(rho, cfg, seeds));
}
