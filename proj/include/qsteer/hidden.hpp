#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsteer/filter.hpp"
#include "qsteer/rng.hpp"
#include "qsteer/steering.hpp"

namespace qsteer {

// Monte Carlo search over random filter ensembles for hidden steerability.
struct SearchConfig {
  int n_samples = 1000;
  std::uint64_t rng_seed = 1;
  double min_branch_prob = 1e-3;  // rarer branches are skipped, not renormalized
  // reduced per-sample budget; the top candidates are re-verified at full budget
  SolverConfig per_sample_solver{1.2e-5, 1e-3, 8, 1e-4, 4000, 24};
  SolverConfig verify_solver{};
  int verify_top = 10;
  int threads = 0;  // 0 = hardware concurrency
};

struct BranchRadii {
  int sample_index = 0;
  int branch_a = 1;
  int branch_b = 1;
  double probability = 0.0;
  double r_ab = 0.0;
  double r_ba = 0.0;
  FilterEnsemble ensemble;
};

// one row per sampled ensemble; branch order (1,1), (1,2), (2,1), (2,2);
// radii are NaN for branches below the probability threshold
struct SampleRow {
  int sample_index = 0;
  FilterEnsemble ensemble;
  std::array<double, 4> branch_probability{};
  std::array<double, 4> r_ab{};
  std::array<double, 4> r_ba{};
};

struct SearchReport {
  std::optional<StateParams> params;  // attached when the state came from one
  double concurrence = 0.0;
  double max_radius_ab = 0.0;
  double max_radius_ba = 0.0;
  FilterEnsemble argmax_ab;
  FilterEnsemble argmax_ba;
  long long samples_evaluated = 0;  // branch evaluations, <= 4 n_samples
  long long branches_skipped = 0;
  long long solver_failures = 0;
  std::vector<SampleRow> samples;     // screening results, one row per sample
  std::vector<BranchRadii> verified;  // re-verified top candidates
};

// a1, a2, b1, b2 independent uniform on [0.01, 1]; deterministic given seed.
FilterEnsemble sample_ensemble(Rng& rng);

// Evaluates both steering radii of every branch with probability above the
// threshold for n_samples random ensembles. Deterministic for a fixed config
// regardless of the worker count (per-sample derived seeds, indexed merge).
SearchReport hidden_search(const DensityMatrix& rho, const SearchConfig& cfg);
SearchReport hidden_search(const StateParams& params, const SearchConfig& cfg);

enum class SteeringRegion { TwoWay, OneWayAToB, TwoWayUnsteerable };
std::string to_string(SteeringRegion r);

struct RegionRow {
  double theta = 0.0;
  double eta = 0.0;
  SteeringRegion region = SteeringRegion::TwoWayUnsteerable;
};

// Closed-form region map of the state family over a parameter grid.
std::vector<RegionRow> sweep_state_map(const std::vector<double>& thetas,
                                       const std::vector<double>& etas);

}  // namespace qsteer
