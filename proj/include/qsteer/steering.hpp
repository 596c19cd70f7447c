#pragma once

#include <array>
#include <memory>
#include <string>

#include "qsteer/core.hpp"

namespace qsteer {

// Three projective measurement directions on the measuring side.
struct MeasurementTriple {
  Vec3 n1{1, 0, 0};
  Vec3 n2{0, 1, 0};
  Vec3 n3{0, 0, 1};

  static MeasurementTriple mub() { return MeasurementTriple{}; }
  const Vec3& dir(int k) const { return k == 0 ? n1 : (k == 1 ? n2 : n3); }
};

// One conditional state of the steered side. outcome 0 corresponds to the
// +n projector (I + n.sigma)/2, outcome 1 to the -n projector.
struct AssemblageElement {
  int setting = 0;   // 0..2
  int outcome = 0;   // 0..1
  double probability = 0.0;
  Mat2 state = Mat2::Identity() / 2.0;  // normalized conditional state
  bool zero_probability = false;
};

// The six conditional states {p_{a|k}, rho_{a|k}} of the steered side.
// Validates per-setting normalization and the no-signaling reduced state.
class Assemblage {
 public:
  explicit Assemblage(std::array<AssemblageElement, 6> elements);

  const AssemblageElement& at(int setting, int outcome) const {
    return elements_[2 * setting + outcome];
  }
  Mat2 reduced_state() const;

  double prob(int setting, int outcome) const { return prob_[2 * setting + outcome]; }
  // Bloch part of the sub-normalized element p_{a|k} rho_{a|k}
  const Vec3& subnormalized_bloch(int setting, int outcome) const {
    return subvec_[2 * setting + outcome];
  }

 private:
  std::array<AssemblageElement, 6> elements_;
  std::array<double, 6> prob_{};
  std::array<Vec3, 6> subvec_{};
};

// Conditional states of the non-measuring side after projective measurements
// along dirs on `measuring`.
Assemblage assemblage(const DensityMatrix& rho, const MeasurementTriple& dirs, Side measuring);

// Local-hidden-state model: eight weighted components with the full set of
// deterministic responses. Component i answers outcome bit_k(i) for setting k.
// Bloch norms are unconstrained (unphysical carriers are the point).
struct LhsComponent {
  double weight = 0.125;
  double trace = 1.0;
  BlochVector r;
};

struct LHSModel {
  std::array<LhsComponent, 8> components;

  static bool responds(int component, int setting, int outcome) {
    return ((component >> setting) & 1) == outcome;
  }
  // max_i |r_i| / t_i
  double max_radius() const;
};

// Fit error between model and assemblage:
//   sum_{a,k} ( ||sum_i p_i rho_i D_i(a|k) - p_{a|k} rho_{a|k}||_F^2
//             + (sum_i p_i D_i(a|k) - p_{a|k})^2 ).
double lhs_cost(const Assemblage& a, const LHSModel& m);

struct SolverConfig {
  double err = 1.2e-5;         // feasibility threshold on the fit error
  double bisection_tol = 1e-4; // radius bisection tolerance
  int outer_seeds = 32;        // random direction-triple seeds beside MUB
  double outer_tol = 1e-4;     // simplex convergence tolerance on the radius
  int max_iters = 4000;        // inner solver iteration cap
  int outer_evals = 160;       // simplex evaluation cap per restart
};

enum class SteerDirection { AToB, BToA };

enum class SteeringConfiguration {
  TwoWay,
  OneWayAToB,
  OneWayBToA,
  TwoWayUnsteerable,
  BoundaryAmbiguous,
};
std::string to_string(SteeringConfiguration c);

struct SolveDiagnostics {
  long long inner_iterations = 0;  // accumulated ADMM iterations
  int radius_evaluations = 0;      // feasibility solves
  int triple_evaluations = 0;      // direction triples scored
  double feasibility_error = 0.0;  // E(t) at the accepted threshold
  double feasibility_floor = 0.0;  // E at the unconstrained radius bound
  bool converged = true;
};

struct RadiusResult {
  double radius = 0.0;
  MeasurementTriple dirs;
  SolveDiagnostics diag;
};

// Steering-radius solver. Holds private scratch state: one instance per
// thread; distinct instances may run concurrently.
class SteeringSolver {
 public:
  explicit SteeringSolver(SolverConfig cfg = {});
  ~SteeringSolver();
  SteeringSolver(SteeringSolver&&) noexcept;
  SteeringSolver& operator=(SteeringSolver&&) noexcept;

  const SolverConfig& config() const { return cfg_; }

  // accumulated counters and convergence state of the most recent operation
  const SolveDiagnostics& diagnostics() const;

  // E(t): minimum lhs_cost over models with every |r_i|/t_i <= radius_bound;
  // non-increasing in radius_bound. Optionally returns the best model found.
  double feasibility_error(const Assemblage& a, double radius_bound,
                           LHSModel* best = nullptr);

  // Smallest radius bound with E(t) <= err, found by bisection on [0, 4] and
  // sharpened by a root extrapolation of sqrt(E - floor); see README.
  double radius_fixed_dirs(const Assemblage& a, SolveDiagnostics* diag = nullptr);

  // max over measurement triples of radius_fixed_dirs, via simplex refinement
  // from the MUB seed plus cfg.outer_seeds random rotations of it.
  RadiusResult steering_radius(const DensityMatrix& rho, SteerDirection dir);

 private:
  struct Impl;
  SolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrappers over a fresh solver instance.
double feasibility_error(const Assemblage& a, double radius_bound, const SolverConfig& cfg);
double radius_fixed_dirs(const Assemblage& a, const SolverConfig& cfg);
RadiusResult steering_radius(const DensityMatrix& rho, SteerDirection dir,
                             const SolverConfig& cfg);

// Closed-form steerability predicates of the asymmetric family, as printed:
//   A->B steerable (3 settings)    iff eta > 1/sqrt(3)
//   one-way window                 iff 1/sqrt(3) < eta <= 1/sqrt(1+2 sin^2 2theta)
//   B->A unsteerable (inf settings) iff cos^2(2theta) >= (2 eta - 1)/((2 - eta) eta^3)
struct AnalyticPredicates {
  bool ab_steerable_3set = false;
  bool oneway_window = false;
  bool ba_unsteerable_infset = false;
};
AnalyticPredicates analytic_predicates(const StateParams& p);
double oneway_upper_bound(double theta);  // 1/sqrt(1 + 2 sin^2 2theta)

struct SteeringReport {
  double r_ab = 0.0;
  double r_ba = 0.0;
  MeasurementTriple dirs_ab;
  MeasurementTriple dirs_ba;
  SteeringConfiguration configuration = SteeringConfiguration::TwoWayUnsteerable;
  SolveDiagnostics diag_ab;
  SolveDiagnostics diag_ba;
};

// Both radii plus the configuration label; radii within 2*bisection_tol of 1
// are reported as boundary-ambiguous rather than forced into a class.
SteeringReport classify(const DensityMatrix& rho, const SolverConfig& cfg = {});

}  // namespace qsteer
