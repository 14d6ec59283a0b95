#pragma once

/**
 * @file
 * Two-qubit state foundations: validated density matrices, Pauli algebra,
 * the Bloch (local vectors + correlation tensor) decomposition, the
 * correlation-tensor spectrum, and Born-rule outcome distributions for
 * joint projective spin measurements.
 *
 * Pauli convention: sigma_1 = X, sigma_2 = Y, sigma_3 = Z in the
 * computational basis; qubit A is the left tensor factor, so the basis
 * index of |ab> is 2a + b.
 */

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace steerqkd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace tol {
inline constexpr double kMatrixEq = 1e-10;   ///< default ComplexMatrix equality
inline constexpr double kRepairable = 1e-8;  ///< symmetrized / renormalized
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = -1e-9;        ///< smallest admissible eigenvalue
inline constexpr double kUnit = 1e-9;        ///< unit-vector / orthogonality
inline constexpr double kProbClamp = -1e-12; ///< float noise floor on p(a,b)
inline constexpr double kBoundary = 1e-12;   ///< strict-inequality guard band
} // namespace tol

/// Entry-wise comparison with an absolute tolerance. Shapes must match.
bool approx_equal(const ComplexMatrix &lhs, const ComplexMatrix &rhs,
                  double tolerance = tol::kMatrixEq);

/// sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
const Matrix2c &pauli(int index);

/// A (x) B with A acting on qubit A.
Matrix4c kron(const Matrix2c &A, const Matrix2c &B);

/// n.sigma for a real 3-vector n.
Matrix2c spin_operator(const Vec3 &n);

/**
 * A 4x4 two-qubit density matrix. Construction validates Hermiticity,
 * unit trace and positive semidefiniteness; matrices within the repair
 * band (tol::kRepairable) are symmetrized and renormalized first.
 */
class DensityMatrix {
  public:
    /// @throws InvalidState when the matrix is not a legal state.
    static DensityMatrix from_matrix(const Matrix4c &mat);
    /// @throws InvalidState when the matrix is not 4x4 or not a legal state.
    static DensityMatrix from_matrix(const ComplexMatrix &mat);

    /// Projector onto a normalized 4-component pure state.
    static DensityMatrix pure(const Eigen::Vector4cd &psi);

    static DensityMatrix maximally_mixed();

    const Matrix4c &matrix() const noexcept { return mat_; }
    Complex operator()(int row, int col) const { return mat_(row, col); }

  private:
    explicit DensityMatrix(const Matrix4c &mat) : mat_(mat) {}
    Matrix4c mat_;
};

/// Local Bloch vectors and correlation tensor W (w_jk = Tr[rho s_j (x) s_k]).
struct BlochForm {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
    Mat3 W = Mat3::Zero();
};

/**
 * Singular values of W (descending) and a signed triple carrying
 * sign(det W) on the smallest one. Downstream formulas only use |t_ii| or
 * t_ii^2, so the sign choice never changes a verdict.
 */
struct TensorSpectrum {
    std::array<double, 3> sigma{};
    std::array<double, 3> signed_values{};

    double sum() const noexcept { return sigma[0] + sigma[1] + sigma[2]; }
    double sum_of_squares() const noexcept {
        return sigma[0] * sigma[0] + sigma[1] * sigma[1] + sigma[2] * sigma[2];
    }

    /// Spectrum of an already diagonal tensor diag(t1, t2, t3). The signed
    /// triple keeps the given signs, sorted by magnitude.
    static TensorSpectrum from_diagonal(double t1, double t2, double t3);
};

/// Three orthonormal measurement directions for one party.
class MeasurementTriad {
  public:
    /// @throws InvalidDirection if the vectors are not orthonormal.
    MeasurementTriad(const Vec3 &d0, const Vec3 &d1, const Vec3 &d2);

    /// (x, y, z).
    static MeasurementTriad coordinate();
    /// Columns of an orthogonal matrix.
    static MeasurementTriad from_columns(const Mat3 &orthogonal);

    const Vec3 &operator[](int index) const { return dirs_[index]; }
    const std::array<Vec3, 3> &dirs() const noexcept { return dirs_; }
    MeasurementTriad negated() const;

  private:
    std::array<Vec3, 3> dirs_;
};

/// Outcome probabilities p(a,b) in lexicographic order (00, 01, 10, 11).
using OutcomeDistribution = std::array<double, 4>;

BlochForm bloch_decompose(const DensityMatrix &rho);

/// @throws NotAState when the assembled matrix is not positive semidefinite.
DensityMatrix reconstruct_state(const BlochForm &bf);

TensorSpectrum tensor_spectrum(const BlochForm &bf);
TensorSpectrum tensor_spectrum(const DensityMatrix &rho);

/**
 * Born-rule distribution for Alice measuring u.sigma and Bob v.sigma.
 * Outcome 0 is the +1 eigenvalue.
 * @throws InvalidDirection if u or v is not a unit vector.
 * @throws InvalidState if a probability is negative beyond float noise.
 */
OutcomeDistribution joint_outcome_distribution(const DensityMatrix &rho,
                                               const Vec3 &u, const Vec3 &v);

/// (La (x) Lb) rho (La (x) Lb)^dagger for 2x2 unitaries La, Lb.
DensityMatrix apply_local_unitaries(const DensityMatrix &rho,
                                    const Matrix2c &La, const Matrix2c &Lb);

/// Partial transpose on qubit B.
Matrix4c partial_transpose(const Matrix4c &mat);

/// Peres-Horodecki test; for two qubits PPT is equivalent to separable.
bool is_ppt(const DensityMatrix &rho, double tolerance = 1e-12);

/// Smallest eigenvalue of a Hermitian 4x4 matrix.
double min_eigenvalue(const Matrix4c &hermitian);

} // namespace steerqkd
