#include "qsteer/filter.hpp"

#include <cmath>

namespace qsteer {

namespace {

Mat2 diag2(double d0, double d1) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = d0;
  m(1, 1) = d1;
  return m;
}

double complement(double a) { return std::sqrt(std::max(0.0, 1.0 - a * a)); }

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// complete Z-basis dephasing on both qubits: keeps the computational diagonal
ComplexMatrix dephase_both(const ComplexMatrix& m) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  out.diagonal() = m.diagonal();
  return out;
}

}  // namespace

Mat2 FilterEnsemble::op(Side side, int branch) const {
  if (branch != 1 && branch != 2) throw std::invalid_argument("filter branch must be 1 or 2");
  const double d0 = (side == Side::A) ? a1 : b1;
  const double d1 = (side == Side::A) ? a2 : b2;
  return branch == 1 ? diag2(d0, d1) : diag2(complement(d0), complement(d1));
}

double FilterEnsemble::completeness_residual() const {
  double res = 0.0;
  for (Side s : {Side::A, Side::B}) {
    const Mat2 sum = op(s, 1).adjoint() * op(s, 1) + op(s, 2).adjoint() * op(s, 2);
    res = std::max(res, (sum - Mat2::Identity()).cwiseAbs().maxCoeff());
  }
  return res;
}

FilterEnsemble ensemble_from_diagonals(double a1, double a2, double b1, double b2) {
  for (double v : {a1, a2, b1, b2})
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("filter amplitude outside [0, 1]");
  return FilterEnsemble{a1, a2, b1, b2};
}

FilterEnsemble ensemble_from_waveplates(const WaveplateAngles& w) {
  for (double a : {w.alpha1, w.alpha2, w.alpha3, w.alpha4})
    if (!(a >= 0.0 && a <= M_PI / 2.0))
      throw std::invalid_argument("waveplate angle outside [0, pi/2]");
  return FilterEnsemble{std::abs(std::cos(2.0 * w.alpha2)), std::sin(2.0 * w.alpha1),
                        std::abs(std::cos(2.0 * w.alpha3)), std::sin(2.0 * w.alpha4)};
}

WaveplateAngles waveplates_for(const FilterEnsemble& f) {
  return WaveplateAngles{0.5 * std::asin(f.a2), 0.5 * std::acos(f.a1), 0.5 * std::acos(f.b1),
                         0.5 * std::asin(f.b2)};
}

BranchOutcome apply_branch(const DensityMatrix& rho, const FilterEnsemble& f, int i, int j) {
  if (!rho.two_qubit()) throw std::invalid_argument("apply_branch expects a two-qubit state");
  const ComplexMatrix fij = tensor(f.op(Side::A, i), f.op(Side::B, j));
  const ComplexMatrix mapped = fij * rho.matrix() * fij.adjoint();
  const double p = std::max(0.0, mapped.trace().real());
  BranchOutcome out;
  out.branch_a = i;
  out.branch_b = j;
  out.probability = p;
  if (p > kDegenerateBranchProb) out.state = DensityMatrix(hermitize(mapped / p));
  return out;
}

std::array<BranchOutcome, 4> apply_all(const DensityMatrix& rho, const FilterEnsemble& f) {
  return {apply_branch(rho, f, 1, 1), apply_branch(rho, f, 1, 2), apply_branch(rho, f, 2, 1),
          apply_branch(rho, f, 2, 2)};
}

DensityMatrix simulate_preparation(const StateParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= M_PI / 2.0))
    throw std::invalid_argument("theta outside [0, pi/2]");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");

  const Eigen::Vector4cd phi = phi_theta(p.theta);
  const ComplexMatrix pure = phi * phi.adjoint();

  // path 2: BC dephasing, 22.5-degree HWP on the A qubit, BC dephasing
  Mat2 had;
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  const ComplexMatrix hwp = tensor(had, Mat2::Identity());
  ComplexMatrix path2 = dephase_both(pure);
  path2 = hwp * path2 * hwp.adjoint();
  path2 = dephase_both(path2);

  return DensityMatrix(hermitize(p.eta * pure + (1.0 - p.eta) * path2));
}

}  // namespace qsteer
