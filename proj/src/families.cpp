#include "steerqkd/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "steerqkd/errors.hpp"
#include "steerqkd/steering.hpp"

namespace steerqkd {

namespace {

constexpr double kWeightTol = 1e-10;

void require_range(double value, double lo, double hi, const char *name) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream msg;
        msg << name << " must lie in [" << lo << ", " << hi << "], got "
            << value;
        throw BadParam(msg.str());
    }
}

} // namespace

void validate(const BellDiagonalParams &p) {
    const auto w = p.as_array();
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (!(w[i] >= -kWeightTol && w[i] <= 1.0 + kWeightTol)) {
            std::ostringstream msg;
            msg << "weight w" << i + 1 << " = " << w[i] << " outside [0, 1]";
            throw BadWeights(msg.str());
        }
        total += w[i];
    }
    if (std::abs(total - 1.0) > kWeightTol) {
        std::ostringstream msg;
        msg << "weights must sum to 1, got " << total;
        throw BadWeights(msg.str());
    }
}

void validate(const WernerParams &p) { require_range(p.omega, 0.0, 1.0, "omega"); }

void validate(const GammaParams &p) {
    require_range(p.q, 0.0, 1.0, "q");
    require_range(p.alpha, 0.0, std::numbers::pi / 4.0, "alpha");
}

Eigen::Vector4cd bell_vector(BellState which) {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    switch (which) {
    case BellState::PsiMinus:
        v[1] = h;
        v[2] = -h;
        break;
    case BellState::PhiPlus:
        v[0] = h;
        v[3] = h;
        break;
    case BellState::PhiMinus:
        v[0] = h;
        v[3] = -h;
        break;
    case BellState::PsiPlus:
        v[1] = h;
        v[2] = h;
        break;
    }
    return v;
}

DensityMatrix make_bell_diagonal(const BellDiagonalParams &p) {
    validate(p);
    const auto w = p.as_array();
    constexpr std::array<BellState, 4> order{
        BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus,
        BellState::PsiPlus};
    Matrix4c rho = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) {
        const Eigen::Vector4cd v = bell_vector(order[i]);
        rho += w[i] * v * v.adjoint();
    }
    return DensityMatrix::from_matrix(rho);
}

BellDiagonalParams werner_weights(const WernerParams &p) {
    validate(p);
    const double rest = (1.0 - p.omega) / 4.0;
    return {(1.0 + 3.0 * p.omega) / 4.0, rest, rest, rest};
}

DensityMatrix make_werner(const WernerParams &p) {
    validate(p);
    const Eigen::Vector4cd s = bell_vector(BellState::PsiMinus);
    const Matrix4c rho =
        p.omega * s * s.adjoint() + (1.0 - p.omega) / 4.0 * Matrix4c::Identity();
    return DensityMatrix::from_matrix(rho);
}

DensityMatrix make_gamma(const GammaParams &p) {
    validate(p);
    Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
    phi[2] = std::cos(p.alpha); // |10>
    phi[1] = std::sin(p.alpha); // |01>
    Matrix4c rho = p.q * phi * phi.adjoint();
    rho(0, 0) += 1.0 - p.q;
    return DensityMatrix::from_matrix(rho);
}

Mat3 bell_diagonal_tensor(const BellDiagonalParams &p) {
    Mat3 W = Mat3::Zero();
    W(0, 0) = 1.0 - 2.0 * (p.w1 + p.w3);
    W(1, 1) = 1.0 - 2.0 * (p.w1 + p.w2);
    W(2, 2) = 1.0 - 2.0 * (p.w1 + p.w4);
    return W;
}

Mat3 bell_diagonal_tensor_weight_form(const BellDiagonalParams &p) {
    Mat3 W = Mat3::Zero();
    W(0, 0) = 1.0 - 2.0 * (p.w1 + p.w3);
    W(1, 1) = 1.0 - 2.0 * (p.w2 + p.w3);
    W(2, 2) = 1.0 - 2.0 * (p.w1 + p.w2);
    return W;
}

Mat3 gamma_tensor(const GammaParams &p) {
    const double off = p.q * std::sin(2.0 * p.alpha);
    Mat3 W = Mat3::Zero();
    W(0, 0) = off;
    W(1, 1) = off;
    W(2, 2) = 1.0 - 2.0 * p.q;
    return W;
}

FamilyVerdicts gamma_predicates(const GammaParams &p) {
    validate(p);
    const double s = std::sin(2.0 * p.alpha);
    const double z = 1.0 - 2.0 * p.q;
    FamilyVerdicts v;
    v.steerable = 2.0 * p.q * p.q * s * s + z * z > 1.0 + tol::kBoundary;
    v.useful = 2.0 * p.q * s + std::abs(z) > std::sqrt(3.0) + tol::kBoundary;
    return v;
}

FamilyVerdicts belldiag_predicates(const BellDiagonalParams &p) {
    FamilyVerdicts v;
    v.steerable = belldiag_f3_steerable(p); // validates
    const std::array<double, 3> w{p.w1, p.w2, p.w3};
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            sum += std::abs(1.0 - 2.0 * (w[i] + w[j]));
        }
    }
    v.useful = sum > std::sqrt(3.0) + tol::kBoundary;
    return v;
}

} // namespace steerqkd
