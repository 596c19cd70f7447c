#include "qsteer/hidden.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace qsteer {

namespace {

struct SampleResult {
  SampleRow row;
  long long evaluated = 0;
  long long skipped = 0;
  long long failures = 0;
};

SampleResult evaluate_sample(const DensityMatrix& rho, const SearchConfig& cfg,
                             int sample_index) {
  SampleResult out;
  Rng rng(Rng::derive(cfg.rng_seed, static_cast<std::uint64_t>(sample_index)));
  const FilterEnsemble f = sample_ensemble(rng);
  out.row.sample_index = sample_index;
  out.row.ensemble = f;
  out.row.r_ab.fill(std::numeric_limits<double>::quiet_NaN());
  out.row.r_ba.fill(std::numeric_limits<double>::quiet_NaN());
  const auto branches = apply_all(rho, f);
  SteeringSolver solver(cfg.per_sample_solver);
  for (int b = 0; b < 4; ++b) {
    const BranchOutcome& branch = branches[b];
    out.row.branch_probability[b] = branch.probability;
    if (!branch.state || branch.probability < cfg.min_branch_prob) {
      ++out.skipped;
      continue;
    }
    try {
      out.row.r_ab[b] = solver.steering_radius(*branch.state, SteerDirection::AToB).radius;
      out.row.r_ba[b] = solver.steering_radius(*branch.state, SteerDirection::BToA).radius;
      ++out.evaluated;
    } catch (const std::exception&) {
      out.row.r_ab[b] = std::numeric_limits<double>::quiet_NaN();
      out.row.r_ba[b] = std::numeric_limits<double>::quiet_NaN();
      ++out.failures;
    }
  }
  return out;
}

}  // namespace

FilterEnsemble sample_ensemble(Rng& rng) {
  const double a1 = rng.uniform(0.01, 1.0);
  const double a2 = rng.uniform(0.01, 1.0);
  const double b1 = rng.uniform(0.01, 1.0);
  const double b2 = rng.uniform(0.01, 1.0);
  return ensemble_from_diagonals(a1, a2, b1, b2);
}

SearchReport hidden_search(const DensityMatrix& rho, const SearchConfig& cfg) {
  if (cfg.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (!(cfg.min_branch_prob > 0.0 && cfg.min_branch_prob <= 0.25))
    throw std::invalid_argument("min_branch_prob outside (0, 0.25]");

  SearchReport rep;
  rep.concurrence = concurrence(rho);

  std::vector<SampleResult> results(cfg.n_samples);
  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, cfg.n_samples);
  if (workers == 1) {
    for (int i = 0; i < cfg.n_samples; ++i) results[i] = evaluate_sample(rho, cfg, i);
  } else {
    std::atomic<int> next{0};
    auto run = [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= cfg.n_samples) return;
        results[i] = evaluate_sample(rho, cfg, i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  // deterministic merge in sample order
  std::vector<BranchRadii> flat;  // evaluated branches, for candidate ranking
  for (const auto& r : results) {
    rep.branches_skipped += r.skipped;
    rep.solver_failures += r.failures;
    rep.samples_evaluated += r.evaluated;
    rep.samples.push_back(r.row);
    for (int b = 0; b < 4; ++b) {
      if (std::isnan(r.row.r_ab[b])) continue;
      BranchRadii cand;
      cand.sample_index = r.row.sample_index;
      cand.branch_a = 1 + b / 2;
      cand.branch_b = 1 + b % 2;
      cand.probability = r.row.branch_probability[b];
      cand.r_ab = r.row.r_ab[b];
      cand.r_ba = r.row.r_ba[b];
      cand.ensemble = r.row.ensemble;
      flat.push_back(cand);
      if (cand.r_ab > rep.max_radius_ab) {
        rep.max_radius_ab = cand.r_ab;
        rep.argmax_ab = cand.ensemble;
      }
      if (cand.r_ba > rep.max_radius_ba) {
        rep.max_radius_ba = cand.r_ba;
        rep.argmax_ba = cand.ensemble;
      }
    }
  }

  // re-verify the strongest candidates of each direction at full budget
  if (cfg.verify_top > 0 && !flat.empty()) {
    std::vector<int> order(flat.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<int> chosen;
    for (int dir = 0; dir < 2; ++dir) {
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return (dir == 0 ? flat[a].r_ab : flat[a].r_ba) >
               (dir == 0 ? flat[b].r_ab : flat[b].r_ba);
      });
      for (int i = 0; i < cfg.verify_top && i < static_cast<int>(order.size()); ++i)
        chosen.push_back(order[i]);
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    for (int idx : chosen) {
      const BranchRadii& cand = flat[idx];
      const auto b = apply_branch(rho, cand.ensemble, cand.branch_a, cand.branch_b);
      if (!b.state) continue;
      SteeringSolver solver(cfg.verify_solver);
      BranchRadii row = cand;
      try {
        row.r_ab = solver.steering_radius(*b.state, SteerDirection::AToB).radius;
        row.r_ba = solver.steering_radius(*b.state, SteerDirection::BToA).radius;
      } catch (const std::exception&) {
        ++rep.solver_failures;
        continue;
      }
      rep.verified.push_back(row);
      if (row.r_ab > rep.max_radius_ab) {
        rep.max_radius_ab = row.r_ab;
        rep.argmax_ab = row.ensemble;
      }
      if (row.r_ba > rep.max_radius_ba) {
        rep.max_radius_ba = row.r_ba;
        rep.argmax_ba = row.ensemble;
      }
    }
  }
  return rep;
}

SearchReport hidden_search(const StateParams& params, const SearchConfig& cfg) {
  SearchReport rep = hidden_search(family_state(params), cfg);
  rep.params = params;
  return rep;
}

std::string to_string(SteeringRegion r) {
  switch (r) {
    case SteeringRegion::TwoWay:
      return "two-way";
    case SteeringRegion::OneWayAToB:
      return "one-way-A->B";
    case SteeringRegion::TwoWayUnsteerable:
      return "two-way-unsteerable";
  }
  return "unknown";
}

std::vector<RegionRow> sweep_state_map(const std::vector<double>& thetas,
                                       const std::vector<double>& etas) {
  if (thetas.empty() || etas.empty()) throw std::invalid_argument("empty sweep grid");
  std::vector<RegionRow> rows;
  rows.reserve(thetas.size() * etas.size());
  for (double theta : thetas)
    for (double eta : etas) {
      const AnalyticPredicates pred = analytic_predicates({theta, eta});
      RegionRow row{theta, eta, SteeringRegion::TwoWayUnsteerable};
      if (pred.oneway_window)
        row.region = SteeringRegion::OneWayAToB;
      else if (pred.ab_steerable_3set)
        row.region = SteeringRegion::TwoWay;
      rows.push_back(row);
    }
  return rows;
}

}  // namespace qsteer
