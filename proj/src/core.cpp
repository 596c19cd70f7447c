#include "qsteer/core.hpp"

#include <cmath>

namespace qsteer {

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// sqrt of a Hermitian PSD matrix, negative rounding noise clamped to zero
ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

const Mat2& pauli(int k) {
  static const Mat2 sigma[4] = {
      (Mat2() << 1, 0, 0, 1).finished(),
      (Mat2() << 0, 1, 1, 0).finished(),
      (Mat2() << 0, -kI, kI, 0).finished(),
      (Mat2() << 1, 0, 0, -1).finished(),
  };
  if (k < 0 || k > 3) throw std::invalid_argument("pauli index out of range");
  return sigma[k];
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  const auto n = m_.rows();
  if ((n != 2 && n != 4) || m_.cols() != n)
    throw std::invalid_argument("DensityMatrix must be 2x2 or 4x4");
  if (!m_.allFinite()) throw std::invalid_argument("DensityMatrix has non-finite entries");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("DensityMatrix is not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > kTraceTol)
    throw std::invalid_argument("DensityMatrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m_), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw std::invalid_argument("DensityMatrix has a negative eigenvalue");
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
    throw std::invalid_argument("tensor expects two 2x2 operators");
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Side keep) {
  if (!rho.two_qubit()) throw std::invalid_argument("partial_trace expects a two-qubit state");
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int s = 0; s < 2; ++s)
        out(i, j) += (keep == Side::A) ? m(2 * i + s, 2 * j + s) : m(2 * s + i, 2 * s + j);
  return DensityMatrix(hermitize(out));
}

Eigen::Vector4cd phi_theta(double theta) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return v;
}

DensityMatrix family_state(const StateParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= M_PI / 2.0))
    throw std::invalid_argument("theta outside [0, pi/2]");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");
  const Eigen::Vector4cd phi = phi_theta(p.theta);
  const double c2 = std::cos(p.theta) * std::cos(p.theta);
  const double s2 = 1.0 - c2;
  ComplexMatrix noise = ComplexMatrix::Zero(4, 4);
  noise.diagonal() << 0.5 * c2, 0.5 * s2, 0.5 * c2, 0.5 * s2;  // I_A/2 x rho_B
  ComplexMatrix m = p.eta * (phi * phi.adjoint()) + (1.0 - p.eta) * noise;
  return DensityMatrix(hermitize(m));
}

DensityMatrix werner_state(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");
  const Eigen::Vector4cd phi = phi_theta(M_PI / 4.0);
  ComplexMatrix m =
      eta * (phi * phi.adjoint()) + (1.0 - eta) * 0.25 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix(hermitize(m));
}

double concurrence(const DensityMatrix& rho) {
  if (!rho.two_qubit()) throw std::invalid_argument("concurrence expects a two-qubit state");
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix yy = tensor(pauli(2), pauli(2));
  const ComplexMatrix tilde = yy * m.conjugate() * yy;
  // eigenvalues of rho*tilde via the Hermitian form sqrt(rho) tilde sqrt(rho)
  const ComplexMatrix root = psd_sqrt(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(root * tilde * root),
                                                  Eigen::EigenvaluesOnly);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
  return std::max(0.0, vals(0) - vals(1) - vals(2) - vals(3));
}

namespace detail {

double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const ComplexMatrix root = psd_sqrt(rho);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(root * sigma * root),
                                                  Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace detail

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity dimension mismatch");
  return detail::uhlmann_fidelity(rho.matrix(), sigma.matrix());
}

BlochVector bloch(const ComplexMatrix& op) {
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("bloch expects 2x2");
  BlochVector r;
  r.x = (op * pauli(1)).trace().real();
  r.y = (op * pauli(2)).trace().real();
  r.z = (op * pauli(3)).trace().real();
  return r;
}

ComplexMatrix bloch_to_op(double trace, const BlochVector& r) {
  return 0.5 * (trace * pauli(0) + r.x * pauli(1) + r.y * pauli(2) + r.z * pauli(3));
}

}  // namespace qsteer
