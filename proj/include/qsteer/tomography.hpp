#pragma once

#include <string>
#include <vector>

#include "qsteer/filter.hpp"
#include "qsteer/rng.hpp"

namespace qsteer {

// Synthetic photon-counting experiment. Labels follow the polarization
// encoding |0> = H, |1> = V; single-qubit projectors are the Pauli
// eigenstates {H, V, D, A, R, L} and preparations are {H, V, D, R}.

struct CountEntry {
  std::string prep;   // preparation label, "-" for state tomography
  std::string proj;   // projector label ("H".."L" or pairs like "HV")
  std::string port;   // output port: "C" for state counts, "1"/"2" for filters
  double expected = 0.0;  // Born mean
  long long count = 0;    // realized (equals rounded mean in noiseless mode)
};

struct CountsRecord {
  std::vector<CountEntry> entries;
  double n_per_setting = 0.0;
  bool noiseless = false;
};

Mat2 projector1q(const std::string& label);
Mat2 prep_state1q(const std::string& label);
const std::vector<std::string>& projector_labels6();
const std::vector<std::string>& prep_labels4();

// Two-qubit projector label sets for state tomography: the minimal 16-setting
// set {H,V,D,R}x{H,V,D,R} and the 36-setting overcomplete Pauli set.
std::vector<std::string> state_settings16();
std::vector<std::string> state_settings36();

// Coincidence counts for projective measurements on a two-qubit state.
// rng == nullptr produces exact Born means ("noiseless").
CountsRecord simulate_state_counts(const DensityMatrix& rho,
                                   const std::vector<std::string>& settings,
                                   double n_per_setting, Rng* rng);

// Counts behind one side of a filter ensemble: for each preparation and
// projector x, port b collects N <x| F_b rho F_b^+ |x>.
CountsRecord simulate_process_counts(const FilterEnsemble& f, Side side,
                                     double n_per_setting, Rng* rng);

// Linear inversion over the measured projector frame followed by projection
// onto the PSD unit-trace cone.
DensityMatrix reconstruct_state(const CountsRecord& counts);

// Process matrix in the Pauli basis: E(rho) = sum_mn chi_mn sigma_m rho sigma_n^+.
// Hermitian, PSD and trace-preserving within 1e-8 after projection.
class ChiMatrix {
 public:
  explicit ChiMatrix(Eigen::Matrix4cd m, bool validate = true);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  double trace_preservation_residual() const;

 private:
  Eigen::Matrix4cd m_;
};

// Single-qubit process tomography from summed-port counts over the four
// preparations; least squares in the Pauli basis, then alternating projection
// onto the PSD and trace-preserving sets.
ChiMatrix process_tomography(const CountsRecord& counts);

// Fraction of photons leaving through each port, averaged over preparations;
// equals Tr(F_b^+ F_b)/2 in noiseless mode.
std::pair<double, double> branch_fractions(const CountsRecord& counts);

struct KrausCoefficients {
  Eigen::Vector4d a1 = Eigen::Vector4d::Zero();  // F_1 = sum_m a1[m] sigma_m
  Eigen::Vector4d a2 = Eigen::Vector4d::Zero();
  double residual = 0.0;
  bool poor_fit = false;
};

// Recovers real Pauli coefficients of the two Kraus branches from chi under
// the trace constraints ||a_b||^2 = fraction_b. Branch signs and, for equal
// fractions, branch order are gauge; outputs are canonicalized (leading
// diagonal entry nonnegative, larger leading entry first at a fraction tie).
// The pair is determined only up to a simultaneous X conjugation of both
// branches, which (chi, fractions) cannot resolve.
KrausCoefficients fit_kraus(const ChiMatrix& chi, double fraction1, double fraction2);

// Resolves the X-conjugation freedom of fit_kraus against the port-resolved
// counts the processes were measured with.
KrausCoefficients disambiguate_kraus(const KrausCoefficients& fit,
                                     const CountsRecord& counts);

Mat2 kraus_matrix(const Eigen::Vector4d& coeffs);
Eigen::Vector4d pauli_coefficients(const Mat2& op);  // real part projection

// Choi-state fidelity between normalized process matrices (squared Uhlmann).
double process_fidelity(const ChiMatrix& a, const ChiMatrix& b);

// Exact process matrix of one side of a filter ensemble (testing/reference).
ChiMatrix chi_of_ensemble_side(const FilterEnsemble& f, Side side);

}  // namespace qsteer
