#include "steerqkd/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steerqkd/errors.hpp"

namespace steerqkd {

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

double correlator_sum(const BlochForm &bf, const std::array<Vec3, 3> &alice,
                      const MeasurementTriad &bob) {
    double sum = 0.0;
    for (int l = 0; l < 3; ++l) {
        sum += alice[l].dot(bf.W * bob[l]);
    }
    return sum;
}

// Completes a right-handed frame if an SVD factor came out improper; the
// singular vectors stay valid up to sign.
Mat3 proper(const Mat3 &m) {
    Mat3 out = m;
    if (out.determinant() < 0.0) {
        out.col(2) = -out.col(2);
    }
    return out;
}

} // namespace

double cjwr_functional(const BlochForm &bf, const MeasurementTriad &alice,
                       const MeasurementTriad &bob) {
    return kInvSqrt3 * std::abs(correlator_sum(bf, alice.dirs(), bob));
}

double cjwr_functional(const DensityMatrix &rho, const MeasurementTriad &alice,
                       const MeasurementTriad &bob) {
    return cjwr_functional(bloch_decompose(rho), alice, bob);
}

double cjwr_functional(const BlochForm &bf, const std::array<Vec3, 3> &alice,
                       const MeasurementTriad &bob) {
    for (const auto &a : alice) {
        if (!a.allFinite() || std::abs(a.norm() - 1.0) > tol::kUnit) {
            throw InvalidDirection("Alice setting must be a unit vector");
        }
    }
    return kInvSqrt3 * std::abs(correlator_sum(bf, alice, bob));
}

double f3_bound(const TensorSpectrum &spec) {
    return std::sqrt(spec.sum_of_squares());
}

bool is_f3_steerable(const TensorSpectrum &spec) {
    return spec.sum_of_squares() > 1.0 + tol::kBoundary;
}

double chsh_bound(const TensorSpectrum &spec) {
    const auto &s = spec.sigma;
    return 2.0 * std::sqrt(s[0] * s[0] + s[1] * s[1]);
}

bool is_chsh_violating(const TensorSpectrum &spec) {
    const auto &s = spec.sigma;
    return s[0] * s[0] + s[1] * s[1] > 1.0 + tol::kBoundary;
}

SteeringVerdict steering_verdict(const TensorSpectrum &spec) {
    SteeringVerdict v;
    v.f3_bound = f3_bound(spec);
    v.steerable = is_f3_steerable(spec);
    v.chsh_bound = chsh_bound(spec);
    v.chsh_violating = is_chsh_violating(spec);
    return v;
}

CjwrSettings optimal_cjwr_settings(const BlochForm &bf) {
    // Work in the eigenbasis of M = W^T W and rotate it until every basis
    // vector has the mean diagonal value Tr(M)/3.
    const Mat3 M = bf.W.transpose() * bf.W;
    Eigen::SelfAdjointEigenSolver<Mat3> eig(M);
    Mat3 basis = eig.eigenvectors();
    Vec3 d = eig.eigenvalues();
    const double mean = d.sum() / 3.0;

    auto rotate_to_mean = [&](int i, int j) {
        if (std::abs(d[i] - d[j]) <= 1e-15) {
            return;
        }
        const double c2 = std::clamp((mean - d[j]) / (d[i] - d[j]), 0.0, 1.0);
        const double c = std::sqrt(c2);
        const double s = std::sqrt(1.0 - c2);
        const Vec3 ei = basis.col(i);
        const Vec3 ej = basis.col(j);
        basis.col(i) = c * ei + s * ej;
        basis.col(j) = -s * ei + c * ej;
        d[j] = d[i] + d[j] - mean;
        d[i] = mean;
    };

    Eigen::Index hi = 0;
    Eigen::Index lo = 0;
    d.maxCoeff(&hi);
    d.minCoeff(&lo);
    if (hi != lo) {
        rotate_to_mean(static_cast<int>(hi), static_cast<int>(lo));
        // The first rotation only couples (hi, lo), so M is still diagonal
        // in the (lo, rest) plane.
        const int rest = 3 - static_cast<int>(hi) - static_cast<int>(lo);
        if (d[lo] >= d[rest]) {
            rotate_to_mean(static_cast<int>(lo), rest);
        } else {
            rotate_to_mean(rest, static_cast<int>(lo));
        }
    }
    basis = proper(basis);

    std::array<Vec3, 3> alice;
    for (int l = 0; l < 3; ++l) {
        const Vec3 image = bf.W * basis.col(l);
        const double norm = image.norm();
        alice[l] = norm > 1e-300 ? Vec3(image / norm) : Vec3(basis.col(l));
    }
    return {alice, MeasurementTriad::from_columns(basis)};
}

std::pair<MeasurementTriad, MeasurementTriad>
aligned_singular_triads(const BlochForm &bf) {
    Eigen::JacobiSVD<Mat3> svd(bf.W, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // u_l . W v_l = s_l >= 0 for the raw factors; flipping a column of both
    // keeps that, so only U's handedness is fixed to make the pair proper.
    Mat3 U = svd.matrixU();
    Mat3 V = svd.matrixV();
    if (U.determinant() < 0.0) {
        U.col(2) = -U.col(2);
        V.col(2) = -V.col(2);
    }
    return {MeasurementTriad::from_columns(U),
            MeasurementTriad::from_columns(V)};
}

double belldiag_f3_radicand(const BellDiagonalParams &w) {
    const std::array<double, 3> head{w.w1, w.w2, w.w3};
    double pairs = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            pairs += head[i] * head[j];
        }
    }
    return 8.0 * (pairs + w.w4) - 5.0;
}

bool belldiag_f3_steerable(const BellDiagonalParams &w) {
    validate(w);
    const double radicand = std::max(belldiag_f3_radicand(w), 0.0);
    // sqrt(r) > 1 <=> r > 1 for r >= 0.
    return radicand > 1.0 + tol::kBoundary;
}

double belldiag_absolute_locality_max(const BellDiagonalParams &w) {
    const std::array<double, 3> x{w.w1, w.w2, w.w3};
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double wi = x[i];
        const double wj = x[(i + 1) % 3];
        const double wk = x[(i + 2) % 3];
        const double value = 1.0 - 4.0 * (wi - wi * wi - wi * wj - wi * wk) -
                             2.0 * (wj + wk - wj * wj - wk * wk);
        best = std::max(best, value);
    }
    return best;
}

bool belldiag_absolutely_chsh_local(const BellDiagonalParams &w) {
    validate(w);
    return belldiag_absolute_locality_max(w) <= 0.5;
}

} // namespace steerqkd
