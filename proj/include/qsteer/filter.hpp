#pragma once

#include <array>
#include <optional>

#include "qsteer/core.hpp"

namespace qsteer {

// Branch probabilities below this are reported as degenerate instead of being
// renormalized; downstream Monte Carlo skips them.
inline constexpr double kDegenerateBranchProb = 1e-12;

// Ensemble of four diagonal local filters
//   F_A1 = diag(a1, a2), F_A2 = diag(sqrt(1-a1^2), sqrt(1-a2^2)),
// and likewise for the B side, so that F_A1^+ F_A1 + F_A2^+ F_A2 = I holds
// exactly (no particle is discarded). Branch-2 amplitudes are the positive
// root complements; reflected-port phases are unobservable.
struct FilterEnsemble {
  double a1 = 1.0;
  double a2 = 1.0;
  double b1 = 1.0;
  double b2 = 1.0;

  // branch in {1, 2}
  Mat2 op(Side side, int branch) const;
  double completeness_residual() const;
};

FilterEnsemble ensemble_from_diagonals(double a1, double a2, double b1, double b2);

// HWP settings H1..H4, radians, each in [0, pi/2].
struct WaveplateAngles {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;
};

// F_A1 = diag(cos 2a2, sin 2a1), F_B1 = diag(cos 2a3, sin 2a4).
// Negative cosines beyond the quarter-turn fold onto the canonical positive
// representative (a relative phase, invisible to probabilities and radii).
FilterEnsemble ensemble_from_waveplates(const WaveplateAngles& w);

// Waveplate settings that realize a given ensemble; inverse of the above on
// amplitudes in [0, 1].
WaveplateAngles waveplates_for(const FilterEnsemble& f);

struct BranchOutcome {
  int branch_a = 1;
  int branch_b = 1;
  double probability = 0.0;
  // empty when probability <= kDegenerateBranchProb
  std::optional<DensityMatrix> state;
};

// rho -> F_ij rho F_ij^+ / p with p = Tr(F_ij rho F_ij^+), F_ij = F_Ai x F_Bj.
BranchOutcome apply_branch(const DensityMatrix& rho, const FilterEnsemble& f, int i, int j);

// All four branches in order (1,1), (1,2), (2,1), (2,2); probabilities sum to 1.
std::array<BranchOutcome, 4> apply_all(const DensityMatrix& rho, const FilterEnsemble& f);

// Two-path interferometer preparation: path 1 passes |Phi(theta)> untouched;
// path 2 dephases both qubits in the Z basis, rotates the A qubit by a 22.5
// degree half-wave plate (H -> (H+V)/sqrt2), and dephases again, yielding
// I_A/2 x rho_B. The eta-weighted mixture reproduces family_state exactly.
DensityMatrix simulate_preparation(const StateParams& p);

}  // namespace qsteer
