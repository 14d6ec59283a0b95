#include "steerqkd/qber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "steerqkd/errors.hpp"

namespace steerqkd {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// One party's MUB assignment: which Pauli axis (0 = z, 1 = x, 2 = y, the
// order of the signed-axis table) sits in each slot, and its sign.
struct Assignment {
    std::array<int, 3> axis{};
    std::array<int, 3> sign{};
};

const std::array<Assignment, 48> &assignments() {
    static const std::array<Assignment, 48> table = [] {
        std::array<Assignment, 48> out{};
        std::array<int, 3> perm{0, 1, 2};
        int n = 0;
        do {
            for (int bits = 0; bits < 8; ++bits) {
                Assignment a;
                a.axis = perm;
                for (int slot = 0; slot < 3; ++slot) {
                    a.sign[slot] = (bits >> (2 - slot)) & 1 ? -1 : 1;
                }
                out[n++] = a;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return table;
}

// Table axis k in {z, x, y} maps onto coordinate index {2, 0, 1}.
constexpr std::array<int, 3> kCoordinate{2, 0, 1};

double pair_qber(const Assignment &a, const Assignment &b, const Vec3 &t) {
    double corr = 0.0;
    for (int slot = 0; slot < 3; ++slot) {
        if (a.axis[slot] == b.axis[slot]) {
            corr += a.sign[slot] * b.sign[slot] * t[kCoordinate[a.axis[slot]]];
        }
    }
    return (3.0 - corr) / 6.0;
}

std::array<int, 3> axis_labels(const Assignment &a) {
    std::array<int, 3> out{};
    for (int slot = 0; slot < 3; ++slot) {
        out[slot] = 2 * a.axis[slot] + (a.sign[slot] < 0 ? 2 : 1);
    }
    return out;
}

MubSearchResult make_result(double q, int alice, int bob) {
    const auto &table = assignments();
    return {q, axis_labels(table[alice]), axis_labels(table[bob])};
}

} // namespace

double qber_three_settings(const BlochForm &bf, const MeasurementTriad &alice,
                           const MeasurementTriad &bob) {
    double corr = 0.0;
    for (int i = 0; i < 3; ++i) {
        corr += alice[i].dot(bf.W * bob[i]);
    }
    return (3.0 - corr) / 6.0;
}

double qber_two_settings(const BlochForm &bf, const std::array<Vec3, 2> &alice,
                         const std::array<Vec3, 2> &bob) {
    double corr = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (const Vec3 *n : {&alice[i], &bob[i]}) {
            if (!n->allFinite() || std::abs(n->norm() - 1.0) > tol::kUnit) {
                throw InvalidDirection("two-setting directions must be unit");
            }
        }
        corr += alice[i].dot(bf.W * bob[i]);
    }
    return (2.0 - corr) / 4.0;
}

double qber_min(const TensorSpectrum &spec) { return (3.0 - spec.sum()) / 6.0; }

double qber_min_two_settings(const TensorSpectrum &spec) {
    return (2.0 - (spec.sigma[0] + spec.sigma[1])) / 4.0;
}

double critical_qber() { return (3.0 - kSqrt3) / 6.0; }

UsefulnessVerdict classify_usefulness(const TensorSpectrum &spec) {
    UsefulnessVerdict v;
    v.q_min = qber_min(spec);
    v.critical_rate = critical_qber();
    v.useful = spec.sum() > kSqrt3 + tol::kBoundary;
    v.margin = v.critical_rate - v.q_min;
    return v;
}

const std::array<Vec3, 6> &signed_mub_axes() {
    static const std::array<Vec3, 6> axes{
        Vec3(0, 0, 1), Vec3(0, 0, -1), Vec3(1, 0, 0),
        Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)};
    return axes;
}

MubSearchResult serial::brute_force_qber_min(const Vec3 &diagonal) {
    const auto &table = assignments();
    double best = std::numeric_limits<double>::infinity();
    int best_a = 0;
    int best_b = 0;
    for (int a = 0; a < 48; ++a) {
        for (int b = 0; b < 48; ++b) {
            const double q = pair_qber(table[a], table[b], diagonal);
            if (q < best) {
                best = q;
                best_a = a;
                best_b = b;
            }
        }
    }
    return make_result(best, best_a, best_b);
}

MubSearchResult brute_force_qber_min(const Vec3 &diagonal) {
    const auto &table = assignments();
    std::array<double, 48> row_best{};
    std::array<int, 48> row_arg{};
#pragma omp parallel for schedule(static)
    for (int a = 0; a < 48; ++a) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int b = 0; b < 48; ++b) {
            const double q = pair_qber(table[a], table[b], diagonal);
            if (q < best) {
                best = q;
                arg = b;
            }
        }
        row_best[a] = best;
        row_arg[a] = arg;
    }
    int best_a = 0;
    for (int a = 1; a < 48; ++a) {
        if (row_best[a] < row_best[best_a]) {
            best_a = a;
        }
    }
    return make_result(row_best[best_a], best_a, row_arg[best_a]);
}

MubSearchResult brute_force_qber_min(const TensorSpectrum &spec) {
    const auto &t = spec.signed_values;
    return brute_force_qber_min(Vec3(t[0], t[1], t[2]));
}

ViolationCertificate useful_region_given_violation(double V, double lam22,
                                                   double lam33) {
    if (!(V > 0.0 && V <= kSqrt3 + tol::kBoundary)) {
        std::ostringstream msg;
        msg << "violation V must lie in (0, sqrt 3], got " << V;
        throw BadViolation(msg.str());
    }
    for (double lam : {lam22, lam33}) {
        if (!(lam >= 0.0 && lam <= 1.0)) {
            std::ostringstream msg;
            msg << "tensor magnitudes must lie in [0, 1], got " << lam;
            throw BadViolation(msg.str());
        }
    }
    ViolationCertificate cert;
    const double radicand = V * V - lam22 * lam22 - lam33 * lam33;
    if (radicand < 0.0) {
        cert.implied_lam11 = std::numeric_limits<double>::quiet_NaN();
        return cert;
    }
    const double lam11 = std::sqrt(radicand);
    cert.implied_lam11 = lam11;
    cert.literal_chain_holds = kSqrt3 - lam11 - lam22 < lam11 && lam11 <= 1.0;

    const Interval region{std::max(0.0, kSqrt3 - lam22 - lam33), 1.0};
    if (region.low < region.high && lam11 > region.low + tol::kBoundary &&
        lam11 <= region.high + tol::kBoundary) {
        cert.region = region;
    }
    return cert;
}

double min_secure_key_rate(double Q) {
    if (!(Q >= 0.0 && Q <= 0.5)) {
        std::ostringstream msg;
        msg << "QBER must lie in [0, 0.5], got " << Q;
        throw BadQber(msg.str());
    }
    const double q_log_q = Q > 0.0 ? Q * std::log2(Q) : 0.0;
    return 1.0 + 2.0 * q_log_q + 2.0 * (1.0 - 2.0 * Q) * std::log2(1.0 - Q);
}

} // namespace steerqkd
