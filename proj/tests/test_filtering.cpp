#include <doctest.h>

#include <cmath>

#include "steerqkd/errors.hpp"
#include "steerqkd/families.hpp"
#include "steerqkd/filtering.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/steering.hpp"
#include "support/random_states.hpp"

using namespace steerqkd;
using namespace steerqkd::testing;

namespace {

const FilterPair kWorked{0.02119, 0.02563};
const FilterPair kTable{0.15, 0.02563};

// Success probability of the gamma family, written out by hand.
double gamma_success(const GammaParams &g, const FilterPair &f) {
    const double c = std::cos(g.alpha);
    const double s = std::sin(g.alpha);
    return g.q * (c * c * f.eps2 * f.eps2 + s * s * f.eps1 * f.eps1) +
           (1.0 - g.q) * f.eps1 * f.eps1 * f.eps2 * f.eps2;
}

} // namespace

TEST_CASE("worked filtering example") {
    const GammaParams g{0.9, 0.25};
    const FilterOutcome out = apply_local_filters(make_gamma(g), kWorked);
    CHECK(out.q_min_filtered == doctest::Approx(0.19862).epsilon(1e-3));
    CHECK(std::abs(out.q_min_filtered - 0.198623177) < 1e-8);
    CHECK(out.p_succ == doctest::Approx(gamma_success(g, kWorked)).epsilon(1e-12));
    CHECK(out.p_succ == doctest::Approx(5.79785e-4).epsilon(1e-5));
    CHECK(out.literal_keyn_product ==
          doctest::Approx(out.p_succ * qber_min(tensor_spectrum(make_gamma(g)))));
    CHECK(modified_protocol_useful(make_gamma(g), kWorked));
}

TEST_CASE("identity filter changes nothing") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_state(rng);
        const FilterOutcome out = apply_local_filters(rho, {1.0, 1.0});
        CHECK(out.p_succ == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(approx_equal(out.filtered_state.matrix(), rho.matrix(), 1e-12));
    }
}

TEST_CASE("modified protocol with the table1 filters") {
    CHECK(modified_protocol_useful(make_gamma({0.5, 0.2}), kTable));
    // With eps = (0.15, 0.02563) the useful range for alpha = 0.24 reaches
    // down to q ~ 0.019, so q = 0.85 is useful as well.
    const FilterOutcome out = apply_local_filters(make_gamma({0.85, 0.24}), kTable);
    CHECK(out.q_min_filtered < critical_qber());
    CHECK(!gamma_predicates({0.85, 0.24}).steerable);
}

TEST_CASE("filters that kill the state") {
    const DensityMatrix zero_zero = make_gamma({0.0, 0.1});
    CHECK_THROWS_AS(apply_local_filters(zero_zero, {0.0, 0.5}), FilterAnnihilates);
    CHECK_THROWS_AS(modified_protocol_useful(zero_zero, {0.0, 0.0}), FilterAnnihilates);
    CHECK_THROWS_AS(apply_local_filters(zero_zero, {1.5, 0.5}), BadParam);
}

TEST_CASE("success and failure branches sum to one") {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 2000; ++i) {
        const DensityMatrix rho = random_state(rng);
        const FilterPair f{uniform(rng), uniform(rng)};
        const auto p = branch_probabilities(rho, f);
        CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-10);
        if (p[0] >= kMinSuccessProbability) {
            CHECK(std::abs(apply_local_filters(rho, f).p_succ - p[0]) < 1e-10);
        }
    }
}

TEST_CASE("filtering cannot create entanglement") {
    std::mt19937_64 rng(53);
    int separable = 0;
    for (int i = 0; i < 5000 && separable < 300; ++i) {
        const DensityMatrix rho = random_state(rng);
        if (!is_ppt(rho, 1e-12)) {
            continue;
        }
        ++separable;
        const FilterPair f{uniform(rng, 0.01, 1.0), uniform(rng, 0.01, 1.0)};
        const FilterOutcome out = apply_local_filters(rho, f);
        CHECK(is_ppt(out.filtered_state, 1e-9));
        CHECK(!modified_protocol_useful(rho, f));
    }
    CHECK(separable > 50);
}

TEST_CASE("spectrum of the filtered state is stable under diagonalization order") {
    std::mt19937_64 rng(54);
    for (int i = 0; i < 500; ++i) {
        const DensityMatrix rho = random_state(rng);
        const FilterPair f{uniform(rng, 0.05, 1.0), uniform(rng, 0.05, 1.0)};
        const FilterOutcome out = apply_local_filters(rho, f);
        const BlochForm bf = bloch_decompose(out.filtered_state);
        const TensorSpectrum direct = tensor_spectrum(bf);
        Eigen::JacobiSVD<Mat3> svd(bf.W);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(direct.sigma[k] - svd.singularValues()[k]) < 1e-9);
        }
        CHECK(out.q_min_filtered == doctest::Approx(qber_min(direct)).epsilon(1e-12));
    }
}

TEST_CASE("filter search examples") {
    SUBCASE("singlet qualifies unless the filters are very unequal") {
        // Filtering the singlet gives a pure state with tan(theta) = r, the
        // ratio of the smaller to the larger strength; it is useful iff
        // 1 + 2 sin(2 theta) > sqrt 3.
        const DensityMatrix s = DensityMatrix::pure(bell_vector(BellState::PsiMinus));
        const auto hits = filter_search(s, 0.1);
        const auto grid = filter_grid(0.1);
        std::size_t expected = 0;
        for (double e1 : grid) {
            for (double e2 : grid) {
                const double r = std::min(e1, e2) / std::max(e1, e2);
                expected += 1.0 + 4.0 * r / (1.0 + r * r) > std::sqrt(3.0) ? 1 : 0;
            }
        }
        CHECK(hits.size() == expected);
        CHECK(hits.size() < grid.size() * grid.size());
        CHECK(hits.back().eps1 == doctest::Approx(1.0));
        CHECK(hits.back().eps2 == doctest::Approx(1.0));
        for (double e : grid) {
            CHECK(modified_protocol_useful(s, {e, e}));
        }
    }
    SUBCASE("suitable filters exist for q = 0.6, alpha = 0.7") {
        CHECK(!filter_search(make_gamma({0.6, 0.7}), 0.01).empty());
    }
    SUBCASE("maximally mixed never qualifies") {
        CHECK(filter_search(DensityMatrix::maximally_mixed(), 0.05).empty());
    }
    SUBCASE("bad step") {
        CHECK_THROWS_AS(filter_search(DensityMatrix::maximally_mixed(), 0.0), BadParam);
        CHECK_THROWS_AS(filter_search(DensityMatrix::maximally_mixed(), 0.6), BadParam);
    }
    SUBCASE("row-major ascending order") {
        const auto hits = filter_search(make_gamma({0.95, 0.7}), 0.05);
        for (std::size_t i = 1; i < hits.size(); ++i) {
            const bool ordered = hits[i - 1].eps1 < hits[i].eps1 ||
                                 (hits[i - 1].eps1 == hits[i].eps1 &&
                                  hits[i - 1].eps2 < hits[i].eps2);
            CHECK(ordered);
        }
    }
}

TEST_CASE("filtering rescues some unsteerable gamma states") {
    bool found = false;
    for (int qi = 1; qi <= 20 && !found; ++qi) {
        for (int ai = 1; ai <= 8 && !found; ++ai) {
            const GammaParams g{qi / 20.0, ai * 0.09};
            if (gamma_predicates(g).steerable) {
                continue;
            }
            found = !filter_search(make_gamma(g), 0.05).empty();
        }
    }
    CHECK(found);
}
