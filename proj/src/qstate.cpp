#include "steerqkd/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "steerqkd/errors.hpp"

namespace steerqkd {

namespace {

const std::array<Matrix2c, 4> &pauli_table() {
    static const std::array<Matrix2c, 4> table = [] {
        const Complex i{0.0, 1.0};
        std::array<Matrix2c, 4> p;
        p[0] << 1, 0, 0, 1;
        p[1] << 0, 1, 1, 0;
        p[2] << 0, -i, i, 0;
        p[3] << 1, 0, 0, -1;
        return p;
    }();
    return table;
}

double max_abs(const Matrix4c &m) { return m.cwiseAbs().maxCoeff(); }

void require_unit(const Vec3 &n, const char *name) {
    if (!n.allFinite() || std::abs(n.norm() - 1.0) > tol::kUnit) {
        std::ostringstream msg;
        msg << name << " must be a unit vector (|" << name
            << "| = " << n.norm() << ")";
        throw InvalidDirection(msg.str());
    }
}

} // namespace

Matrix4c kron(const Matrix2c &A, const Matrix2c &B) {
    Matrix4c out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out.block<2, 2>(2 * r, 2 * c) = A(r, c) * B;
        }
    }
    return out;
}

bool approx_equal(const ComplexMatrix &lhs, const ComplexMatrix &rhs,
                  double tolerance) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        return false;
    }
    return lhs.size() == 0 || (lhs - rhs).cwiseAbs().maxCoeff() <= tolerance;
}

const Matrix2c &pauli(int index) { return pauli_table().at(index); }

Matrix2c spin_operator(const Vec3 &n) {
    const auto &p = pauli_table();
    return n[0] * p[1] + n[1] * p[2] + n[2] * p[3];
}

double min_eigenvalue(const Matrix4c &hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian,
                                                   Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::from_matrix(const Matrix4c &mat) {
    if (!mat.allFinite()) {
        throw InvalidState("matrix has non-finite entries");
    }
    Matrix4c rho = mat;
    const double skew = max_abs(rho - rho.adjoint());
    if (skew > tol::kRepairable) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian (max |rho - rho^dagger| = " << skew
            << ")";
        throw InvalidState(msg.str());
    }
    if (skew > 0.0) {
        rho = 0.5 * (rho + rho.adjoint()).eval();
    }
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > tol::kRepairable) {
        std::ostringstream msg;
        msg << "trace must be 1 (got " << trace << ")";
        throw InvalidState(msg.str());
    }
    if (std::abs(trace - 1.0) > tol::kTrace) {
        rho /= trace;
    }
    const double lowest = min_eigenvalue(rho);
    if (lowest < tol::kPsd) {
        std::ostringstream msg;
        msg << "matrix is not positive semidefinite (min eigenvalue "
            << lowest << ")";
        throw InvalidState(msg.str());
    }
    return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix &mat) {
    if (mat.rows() != 4 || mat.cols() != 4) {
        std::ostringstream msg;
        msg << "expected a 4x4 matrix, got " << mat.rows() << "x"
            << mat.cols();
        throw InvalidState(msg.str());
    }
    return from_matrix(Matrix4c(mat));
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector4cd &psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) {
        throw InvalidState("zero state vector");
    }
    const Eigen::Vector4cd unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(Matrix4c::Identity() / 4.0);
}

TensorSpectrum TensorSpectrum::from_diagonal(double t1, double t2, double t3) {
    std::array<double, 3> t{t1, t2, t3};
    std::sort(t.begin(), t.end(), [](double x, double y) {
        return std::abs(x) > std::abs(y);
    });
    TensorSpectrum spec;
    spec.signed_values = t;
    for (int i = 0; i < 3; ++i) {
        spec.sigma[i] = std::abs(t[i]);
    }
    return spec;
}

MeasurementTriad::MeasurementTriad(const Vec3 &d0, const Vec3 &d1,
                                   const Vec3 &d2)
    : dirs_{d0, d1, d2} {
    for (const auto &d : dirs_) {
        require_unit(d, "triad direction");
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(dirs_[i].dot(dirs_[j])) > tol::kUnit) {
                std::ostringstream msg;
                msg << "triad directions " << i << " and " << j
                    << " are not orthogonal (dot = " << dirs_[i].dot(dirs_[j])
                    << ")";
                throw InvalidDirection(msg.str());
            }
        }
    }
}

MeasurementTriad MeasurementTriad::coordinate() {
    return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
}

MeasurementTriad MeasurementTriad::from_columns(const Mat3 &orthogonal) {
    return {orthogonal.col(0), orthogonal.col(1), orthogonal.col(2)};
}

MeasurementTriad MeasurementTriad::negated() const {
    return {-dirs_[0], -dirs_[1], -dirs_[2]};
}

BlochForm bloch_decompose(const DensityMatrix &rho) {
    const auto &p = pauli_table();
    const Matrix4c &m = rho.matrix();
    BlochForm bf;
    for (int j = 1; j <= 3; ++j) {
        bf.a[j - 1] = (m * kron(p[j], p[0])).trace().real();
        bf.b[j - 1] = (m * kron(p[0], p[j])).trace().real();
        for (int k = 1; k <= 3; ++k) {
            bf.W(j - 1, k - 1) = (m * kron(p[j], p[k])).trace().real();
        }
    }
    return bf;
}

DensityMatrix reconstruct_state(const BlochForm &bf) {
    const auto &p = pauli_table();
    Matrix4c m = kron(p[0], p[0]);
    for (int j = 1; j <= 3; ++j) {
        m += bf.a[j - 1] * kron(p[j], p[0]);
        m += bf.b[j - 1] * kron(p[0], p[j]);
        for (int k = 1; k <= 3; ++k) {
            m += bf.W(j - 1, k - 1) * kron(p[j], p[k]);
        }
    }
    m /= 4.0;
    const double lowest = min_eigenvalue(m);
    if (lowest < tol::kPsd) {
        std::ostringstream msg;
        msg << "Bloch parameters do not describe a state (min eigenvalue "
            << lowest << ")";
        throw NotAState(msg.str());
    }
    return DensityMatrix::from_matrix(m);
}

TensorSpectrum tensor_spectrum(const BlochForm &bf) {
    Eigen::JacobiSVD<Mat3> svd(bf.W);
    const Vec3 sv = svd.singularValues(); // already descending
    TensorSpectrum spec;
    for (int i = 0; i < 3; ++i) {
        spec.sigma[i] = sv[i];
        spec.signed_values[i] = sv[i];
    }
    if (bf.W.determinant() < 0.0) {
        spec.signed_values[2] = -spec.signed_values[2];
    }
    return spec;
}

TensorSpectrum tensor_spectrum(const DensityMatrix &rho) {
    return tensor_spectrum(bloch_decompose(rho));
}

OutcomeDistribution joint_outcome_distribution(const DensityMatrix &rho,
                                               const Vec3 &u, const Vec3 &v) {
    require_unit(u, "u");
    require_unit(v, "v");
    const Matrix2c id = Matrix2c::Identity();
    const Matrix2c su = spin_operator(u);
    const Matrix2c sv = spin_operator(v);
    OutcomeDistribution probs{};
    double total = 0.0;
    for (int a = 0; a < 2; ++a) {
        const Matrix2c Pa = 0.5 * (id + (a == 0 ? 1.0 : -1.0) * su);
        for (int b = 0; b < 2; ++b) {
            const Matrix2c Pb = 0.5 * (id + (b == 0 ? 1.0 : -1.0) * sv);
            double p = (rho.matrix() * kron(Pa, Pb)).trace().real();
            if (p < 0.0) {
                if (p < tol::kProbClamp) {
                    std::ostringstream msg;
                    msg << "negative outcome probability " << p;
                    throw InvalidState(msg.str());
                }
                p = 0.0;
            }
            p = std::min(p, 1.0);
            probs[2 * a + b] = p;
            total += p;
        }
    }
    // Clamping can only move the sum by ~1e-12; renormalize exactly.
    for (auto &p : probs) {
        p /= total;
    }
    return probs;
}

DensityMatrix apply_local_unitaries(const DensityMatrix &rho,
                                    const Matrix2c &La, const Matrix2c &Lb) {
    const Matrix4c L = kron(La, Lb);
    return DensityMatrix::from_matrix(Matrix4c(L * rho.matrix() * L.adjoint()));
}

Matrix4c partial_transpose(const Matrix4c &mat) {
    Matrix4c out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    out(2 * a + b, 2 * a2 + b2) = mat(2 * a + b2, 2 * a2 + b);
                }
            }
        }
    }
    return out;
}

bool is_ppt(const DensityMatrix &rho, double tolerance) {
    return min_eigenvalue(partial_transpose(rho.matrix())) >= -tolerance;
}

} // namespace steerqkd
