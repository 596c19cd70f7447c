#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qsteer {

using Complex = std::complex<double>;
// Carrier for all operators; only 2x2 (one qubit) and 4x4 (two qubits) occur.
using ComplexMatrix = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

enum class Side { A, B };

// Pauli basis {I, X, Y, Z}; index 0..3.
const Mat2& pauli(int k);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 vec() const { return Vec3(x, y, z); }
  static BlochVector from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

// Parameters of the asymmetric two-qubit family
//   rho(theta, eta) = eta |Phi(theta)><Phi(theta)| + (1-eta) I_A/2 x rho_B,
// |Phi(theta)> = cos(theta)|00> + sin(theta)|11>, rho_B = Tr_A |Phi><Phi|.
struct StateParams {
  double theta = 0.0;  // radians, [0, pi/2]
  double eta = 0.0;    // mixing weight, [0, 1]
};

// Hermitian, unit-trace, positive-semidefinite (up to tolerance) matrix.
// Tolerances accept tomography reconstructions with rounding noise:
// hermiticity/trace within 1e-10, smallest eigenvalue >= -1e-8.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool two_qubit() const { return m_.rows() == 4; }

  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-8;

 private:
  ComplexMatrix m_;
};

// Kronecker product of two single-qubit operators, A-side slowest index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced state of the kept side of a two-qubit state.
DensityMatrix partial_trace(const DensityMatrix& rho, Side keep);

// The asymmetric family above. theta/eta are range-checked.
DensityMatrix family_state(const StateParams& p);

// rho_W(eta) = eta |phi+><phi+| + (1-eta) I/4, |phi+> = (|00>+|11>)/sqrt(2).
DensityMatrix werner_state(double eta);

// Wootters concurrence of a two-qubit state; in [0,1], positive iff entangled.
double concurrence(const DensityMatrix& rho);

// Squared Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
// The squared convention matches the magnitudes this library reports for
// near-pure reconstructions; see README.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Bloch decomposition of a Hermitian 2x2 operator: op = (t I + r . sigma)/2.
// The inverse accepts any trace and vector, including unphysical |r| > t
// carriers used by hidden-state fits.
BlochVector bloch(const ComplexMatrix& op);
ComplexMatrix bloch_to_op(double trace, const BlochVector& r);

// |Phi(theta)> = cos(theta)|00> + sin(theta)|11> as a 4-vector.
Eigen::Vector4cd phi_theta(double theta);

namespace detail {
// Squared Uhlmann fidelity on raw Hermitian PSD matrices (shared with the
// process-fidelity code, which works on chi matrices rather than states).
double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);
}  // namespace detail

}  // namespace qsteer
