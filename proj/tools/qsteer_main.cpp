// qsteer: command-line front end for the EPR-steering filter toolbox.
// Scenarios mirror the library modules: classification, filter application,
// filter discovery (reversal / distillation / full configuration set),
// asymmetry amplification, hidden-steering Monte Carlo, the analytic state
// map, synthetic tomography, and the preparation cross-check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qsteer/detail/simplex.hpp"
#include "qsteer/json_io.hpp"

using namespace qsteer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 2;
constexpr int kExitInvalidInput = 3;

struct Options {
  double theta = 0.452;
  double eta = 0.647;
  bool theta_set = false;
  bool eta_set = false;
  std::string state_file;
  std::vector<double> filters;     // a1,a2,b1,b2
  std::vector<double> waveplates;  // degrees
  long long samples = -1;
  std::uint64_t seed = 1;
  double err = 1.2e-5;
  std::string out;
  bool full = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--theta", o.theta, "family-state theta (radians)")
      ->check(CLI::Range(0.0, M_PI / 2.0))
      ->each([&](const std::string&) { o.theta_set = true; });
  cmd->add_option("--eta", o.eta, "family-state eta (mixing weight)")
      ->check(CLI::Range(0.0, 1.0))
      ->each([&](const std::string&) { o.eta_set = true; });
  cmd->add_option("--state", o.state_file, "two-qubit state JSON file (overrides theta/eta)");
  cmd->add_option("--filters", o.filters, "filter amplitudes a1,a2,b1,b2")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--waveplates", o.waveplates, "HWP angles h1,h2,h3,h4 in degrees")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--samples", o.samples, "sample count / counts per setting (0 = noiseless)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--err", o.err, "LHS feasibility threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "write the JSON summary to this path");
  cmd->add_flag("--full", o.full, "also write detail CSV next to --out");
  cmd->add_option("--threads", o.threads, "worker thread cap (0 = hardware)");
}

DensityMatrix load_state(const Options& o, Json* echo) {
  if (!o.state_file.empty()) {
    std::ifstream in(o.state_file);
    if (!in) throw std::invalid_argument("cannot open state file: " + o.state_file);
    (*echo)["state_file"] = o.state_file;
    try {
      return density_from_json(Json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("invalid state file: ") + e.what());
    }
  }
  (*echo)["theta"] = o.theta;
  (*echo)["eta"] = o.eta;
  return family_state({o.theta, o.eta});
}

FilterEnsemble load_filters(const Options& o, Json* echo) {
  if (!o.waveplates.empty()) {
    const double k = M_PI / 180.0;
    const WaveplateAngles w{k * o.waveplates[0], k * o.waveplates[1], k * o.waveplates[2],
                            k * o.waveplates[3]};
    (*echo)["waveplates"] = waveplates_to_json(w);
    return ensemble_from_waveplates(w);
  }
  if (o.filters.size() == 4) {
    const FilterEnsemble f =
        ensemble_from_diagonals(o.filters[0], o.filters[1], o.filters[2], o.filters[3]);
    (*echo)["filters"] = ensemble_to_json(f);
    return f;
  }
  throw std::invalid_argument("scenario needs --filters or --waveplates");
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.err = o.err;
  return cfg;
}

void emit(const Json& j, const Options& o) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw std::invalid_argument("cannot write output file: " + o.out);
    out << text;
  }
}

void write_detail(const std::string& csv, const Options& o) {
  if (!o.full) return;
  if (o.out.empty())
    throw std::invalid_argument("--full needs --out to place the detail CSV");
  const std::string path = o.out + ".csv";
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write detail file: " + path);
  out << csv;
}

Json branch_json(const BranchOutcome& b) {
  Json j;
  j["branch"] = {b.branch_a, b.branch_b};
  j["probability"] = b.probability;
  j["degenerate"] = !b.state.has_value();
  return j;
}

// ---------------------------------------------------------------------------
// filter discovery: random screening + simplex refinement over the four
// diagonal amplitudes, scored against a target branch-configuration pattern
// ---------------------------------------------------------------------------

struct BranchRadiiPair {
  double r_ab = 0.0;
  double r_ba = 0.0;
  bool valid = false;
};

struct EnsembleScore {
  FilterEnsemble f;
  double score = std::numeric_limits<double>::infinity();
  std::array<BranchRadiiPair, 4> radii;
};

enum class SearchGoal { AllFour, Reverse, Distill };

std::array<BranchRadiiPair, 4> screen_radii(const DensityMatrix& rho, const FilterEnsemble& f,
                                            SteeringSolver& solver) {
  std::array<BranchRadiiPair, 4> out;
  const auto branches = apply_all(rho, f);
  for (int i = 0; i < 4; ++i) {
    const auto& b = branches[i];
    if (!b.state || b.probability < 1e-3) continue;
    out[i].r_ab = solver.steering_radius(*b.state, SteerDirection::AToB).radius;
    out[i].r_ba = solver.steering_radius(*b.state, SteerDirection::BToA).radius;
    out[i].valid = true;
  }
  return out;
}

double hinge(double x) { return std::max(0.0, x); }

// per-branch cost of realizing one configuration; margin keeps the search
// away from the decision boundary
double config_cost(const BranchRadiiPair& r, SteeringConfiguration target, double rab0,
                   double rba0, double margin) {
  if (!r.valid) return 10.0;
  switch (target) {
    case SteeringConfiguration::TwoWay:
      // the two-way branch doubles as the distillation witness
      return hinge(1.0 + margin - r.r_ab) + hinge(1.0 + margin - r.r_ba) +
             hinge(rab0 + margin - r.r_ab) + hinge(rba0 + margin - r.r_ba);
    case SteeringConfiguration::OneWayAToB:
      return hinge(1.0 + margin - r.r_ab) + hinge(r.r_ba - (1.0 - margin));
    case SteeringConfiguration::OneWayBToA:
      return hinge(r.r_ab - (1.0 - margin)) + hinge(1.0 + margin - r.r_ba);
    case SteeringConfiguration::TwoWayUnsteerable:
      return hinge(r.r_ab - (1.0 - margin)) + hinge(r.r_ba - (1.0 - margin));
    default:
      return 10.0;
  }
}

double goal_score(const std::array<BranchRadiiPair, 4>& radii, SearchGoal goal, double rab0,
                  double rba0, double margin) {
  if (goal == SearchGoal::Reverse) {
    double best = 10.0;
    for (const auto& r : radii)
      best = std::min(best,
                      config_cost(r, SteeringConfiguration::OneWayBToA, rab0, rba0, margin));
    return best;
  }
  if (goal == SearchGoal::Distill) {
    double best = 10.0;
    for (const auto& r : radii)
      best = std::min(best, config_cost(r, SteeringConfiguration::TwoWay, rab0, rba0, margin));
    return best;
  }
  // all four configurations at once: best assignment over the 24 pairings
  static const std::array<SteeringConfiguration, 4> configs = {
      SteeringConfiguration::TwoWay, SteeringConfiguration::OneWayAToB,
      SteeringConfiguration::OneWayBToA, SteeringConfiguration::TwoWayUnsteerable};
  std::array<int, 4> perm = {0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int b = 0; b < 4; ++b) s += config_cost(radii[b], configs[perm[b]], rab0, rba0, margin);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

int run_find_filters(const Options& o, SearchGoal goal, const char* scenario) {
  Json summary;
  summary["scenario"] = scenario;
  const DensityMatrix rho = load_state(o, &summary);
  summary["seed"] = o.seed;

  const SolverConfig full_cfg = solver_config(o);
  SolverConfig screen_cfg = full_cfg;
  screen_cfg.outer_seeds = 0;  // MUB only while screening
  screen_cfg.outer_evals = 0;
  screen_cfg.bisection_tol = 1e-3;
  SolverConfig mid_cfg = full_cfg;
  mid_cfg.outer_seeds = 2;
  mid_cfg.outer_evals = 40;
  mid_cfg.bisection_tol = 1e-3;

  // input radii at full budget; they anchor the distillation requirement
  SteeringSolver full_solver(full_cfg);
  const double rab0 = full_solver.steering_radius(rho, SteerDirection::AToB).radius;
  const double rba0 = full_solver.steering_radius(rho, SteerDirection::BToA).radius;
  summary["input"] = {{"r_ab", rab0}, {"r_ba", rba0}};

  const double margin = 0.015;
  const long long n_random = (o.samples > 0) ? o.samples : 2000;
  constexpr int kKeep = 20;
  constexpr int kRefineEvals = 200;

  Rng rng(o.seed);
  SteeringSolver screen_solver(screen_cfg);
  std::vector<EnsembleScore> pool;
  for (long long s = 0; s < n_random; ++s) {
    EnsembleScore cand;
    cand.f = sample_ensemble(rng);
    cand.radii = screen_radii(rho, cand.f, screen_solver);
    cand.score = goal_score(cand.radii, goal, rab0, rba0, margin);
    pool.push_back(cand);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const EnsembleScore& a, const EnsembleScore& b) {
                     return a.score < b.score;
                   });
  if (pool.size() > kKeep) pool.resize(kKeep);

  // mid-budget rescoring, then simplex refinement of the best candidate
  SteeringSolver mid_solver(mid_cfg);
  for (auto& cand : pool) {
    cand.radii = screen_radii(rho, cand.f, mid_solver);
    cand.score = goal_score(cand.radii, goal, rab0, rba0, margin);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const EnsembleScore& a, const EnsembleScore& b) {
                     return a.score < b.score;
                   });

  auto refine_objective = [&](const std::vector<double>& x) {
    FilterEnsemble f;
    f.a1 = std::clamp(x[0], 0.01, 1.0);
    f.a2 = std::clamp(x[1], 0.01, 1.0);
    f.b1 = std::clamp(x[2], 0.01, 1.0);
    f.b2 = std::clamp(x[3], 0.01, 1.0);
    return goal_score(screen_radii(rho, f, mid_solver), goal, rab0, rba0, margin);
  };
  {
    const auto& seed_f = pool.front().f;
    const auto res = detail::nelder_mead(
        refine_objective, {seed_f.a1, seed_f.a2, seed_f.b1, seed_f.b2}, 0.08, 1e-6,
        kRefineEvals);
    EnsembleScore refined;
    refined.f = ensemble_from_diagonals(
        std::clamp(res.x[0], 0.01, 1.0), std::clamp(res.x[1], 0.01, 1.0),
        std::clamp(res.x[2], 0.01, 1.0), std::clamp(res.x[3], 0.01, 1.0));
    refined.radii = screen_radii(rho, refined.f, mid_solver);
    refined.score = goal_score(refined.radii, goal, rab0, rba0, margin);
    pool.insert(pool.begin(), refined);
  }

  // full-budget verification of the leading candidates
  Json tried = Json::array();
  for (std::size_t attempt = 0; attempt < pool.size() && attempt < 3; ++attempt) {
    const FilterEnsemble& f = pool[attempt].f;
    const auto branches = apply_all(rho, f);
    Json jb = Json::array();
    std::array<SteeringConfiguration, 4> labels{};
    std::array<BranchRadiiPair, 4> verified{};
    for (int i = 0; i < 4; ++i) {
      Json bj = branch_json(branches[i]);
      if (branches[i].state && branches[i].probability >= 1e-3) {
        const SteeringReport rep = classify(*branches[i].state, full_cfg);
        labels[i] = rep.configuration;
        verified[i] = {rep.r_ab, rep.r_ba, true};
        bj["r_ab"] = rep.r_ab;
        bj["r_ba"] = rep.r_ba;
        bj["configuration"] = to_string(rep.configuration);
      } else {
        bj["configuration"] = "skipped";
      }
      jb.push_back(bj);
    }
    bool reversal = false, distill = false;
    for (int i = 0; i < 4; ++i) {
      if (!verified[i].valid) continue;
      reversal |= labels[i] == SteeringConfiguration::OneWayBToA;
      distill |= labels[i] == SteeringConfiguration::TwoWay &&
                 verified[i].r_ab > rab0 && verified[i].r_ba > rba0;
    }
    std::array<bool, 4> seen{};
    static const std::array<SteeringConfiguration, 4> wanted = {
        SteeringConfiguration::TwoWay, SteeringConfiguration::OneWayAToB,
        SteeringConfiguration::OneWayBToA, SteeringConfiguration::TwoWayUnsteerable};
    for (int i = 0; i < 4; ++i)
      if (verified[i].valid)
        for (int w = 0; w < 4; ++w)
          if (labels[i] == wanted[w]) seen[w] = true;
    const bool all_four = seen[0] && seen[1] && seen[2] && seen[3];

    Json cand;
    cand["ensemble"] = ensemble_to_json(f);
    cand["branches"] = jb;
    cand["all_four"] = all_four;
    cand["reversal"] = reversal;
    cand["distillation"] = distill;
    tried.push_back(cand);

    const bool success = (goal == SearchGoal::AllFour && all_four && distill) ||
                         (goal == SearchGoal::Reverse && reversal) ||
                         (goal == SearchGoal::Distill && distill);
    if (success) {
      summary["found"] = true;
      summary["result"] = cand;
      summary["attempts"] = tried.size();
      emit(summary, o);
      return kExitOk;
    }
  }
  summary["found"] = false;
  summary["candidates"] = tried;
  emit(summary, o);
  return kExitSolverFailure;
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

int run_classify(const Options& o) {
  Json summary;
  summary["scenario"] = "classify";
  const DensityMatrix rho = load_state(o, &summary);
  const SteeringReport rep = classify(rho, solver_config(o));
  summary["report"] = steering_report_to_json(rep);
  emit(summary, o);
  return kExitOk;
}

int run_filter_apply(const Options& o) {
  Json summary;
  summary["scenario"] = "filter-apply";
  const DensityMatrix rho = load_state(o, &summary);
  const FilterEnsemble f = load_filters(o, &summary);
  const SolverConfig cfg = solver_config(o);
  Json jb = Json::array();
  double psum = 0.0;
  for (const auto& b : apply_all(rho, f)) {
    Json bj = branch_json(b);
    psum += b.probability;
    if (b.state) {
      const SteeringReport rep = classify(*b.state, cfg);
      bj["r_ab"] = rep.r_ab;
      bj["r_ba"] = rep.r_ba;
      bj["configuration"] = to_string(rep.configuration);
      if (o.full) bj["state"] = density_to_json(*b.state);
    }
    jb.push_back(bj);
  }
  summary["branches"] = jb;
  summary["probability_sum"] = psum;
  emit(summary, o);
  return kExitOk;
}

int run_amplify(const Options& o) {
  Options opts = o;
  if (!opts.theta_set) opts.theta = 0.227;
  if (!opts.eta_set) opts.eta = 0.798;
  if (opts.filters.empty() && opts.waveplates.empty())
    opts.filters = {0.70, 0.20, 0.12, 0.16};
  Json summary;
  summary["scenario"] = "amplify";
  const DensityMatrix rho = load_state(opts, &summary);
  const FilterEnsemble f = load_filters(opts, &summary);
  const SolverConfig cfg = solver_config(opts);

  SteeringSolver solver(cfg);
  const double rab0 = solver.steering_radius(rho, SteerDirection::AToB).radius;
  const double rba0 = solver.steering_radius(rho, SteerDirection::BToA).radius;
  summary["input"] = {{"r_ab", rab0}, {"r_ba", rba0}};

  Json jb = Json::array();
  bool amplified = false;
  for (const auto& b : apply_all(rho, f)) {
    Json bj = branch_json(b);
    if (b.state && b.probability >= 1e-6) {
      const double rab = solver.steering_radius(*b.state, SteerDirection::AToB).radius;
      const double rba = solver.steering_radius(*b.state, SteerDirection::BToA).radius;
      bj["r_ab"] = rab;
      bj["r_ba"] = rba;
      bj["delta_ab"] = rab - rab0;
      bj["delta_ba"] = rba - rba0;
      if (rab > rab0 && rba < rba0) {
        bj["amplifies"] = true;
        amplified = true;
      } else {
        bj["amplifies"] = false;
      }
    }
    jb.push_back(bj);
  }
  summary["branches"] = jb;
  summary["amplified"] = amplified;
  emit(summary, opts);
  return amplified ? kExitOk : kExitSolverFailure;
}

int run_hidden_search(const Options& o) {
  Options opts = o;
  if (!opts.theta_set) opts.theta = 0.4;
  if (!opts.eta_set) opts.eta = 0.5;
  Json summary;
  summary["scenario"] = "hidden-search";
  const DensityMatrix rho = load_state(opts, &summary);
  SearchConfig cfg;
  cfg.n_samples = (opts.samples > 0) ? static_cast<int>(opts.samples) : 1000;
  cfg.rng_seed = opts.seed;
  cfg.threads = opts.threads;
  cfg.per_sample_solver.err = opts.err;
  cfg.verify_solver.err = opts.err;
  summary["seed"] = opts.seed;
  summary["n_samples"] = cfg.n_samples;
  SearchReport rep = hidden_search(rho, cfg);
  if (opts.state_file.empty()) rep.params = StateParams{opts.theta, opts.eta};
  summary["report"] = search_report_to_json(rep);
  emit(summary, opts);
  write_detail(search_rows_to_csv(rep.samples), opts);
  return kExitOk;
}

int run_map(const Options& o) {
  Json summary;
  summary["scenario"] = "map";
  std::vector<double> thetas, etas;
  for (int i = 0; i <= 30; ++i) thetas.push_back(i * (M_PI / 2.0) / 30.0);
  for (int i = 0; i <= 30; ++i) etas.push_back(i / 30.0);
  const auto rows = sweep_state_map(thetas, etas);
  long long two_way = 0, one_way = 0, unsteerable = 0;
  for (const auto& r : rows) {
    if (r.region == SteeringRegion::TwoWay) ++two_way;
    if (r.region == SteeringRegion::OneWayAToB) ++one_way;
    if (r.region == SteeringRegion::TwoWayUnsteerable) ++unsteerable;
  }
  summary["grid"] = {{"thetas", thetas.size()}, {"etas", etas.size()}};
  summary["regions"] = {
      {"two-way", two_way}, {"one-way-A->B", one_way}, {"two-way-unsteerable", unsteerable}};
  const std::string csv = region_rows_to_csv(rows);
  if (o.out.empty()) {
    std::cout << csv;  // the plot-ready table is the product
  } else {
    emit(summary, o);
    const std::string path = o.out + ".csv";
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write detail file: " + path);
    f << csv;
  }
  return kExitOk;
}

int run_tomo_state(const Options& o) {
  Json summary;
  summary["scenario"] = "tomo-state";
  const DensityMatrix rho = load_state(o, &summary);
  const double n = (o.samples >= 0) ? static_cast<double>(o.samples) : 1e4;
  summary["n_per_setting"] = n;
  summary["seed"] = o.seed;
  std::optional<Rng> rng;
  if (n > 0) rng.emplace(o.seed);
  const CountsRecord counts = simulate_state_counts(
      rho, state_settings36(), n > 0 ? n : 1e4, rng ? &*rng : nullptr);
  const DensityMatrix rec = reconstruct_state(counts);
  summary["noiseless"] = counts.noiseless;
  summary["fidelity_to_truth"] = fidelity(rec, rho);
  summary["reconstructed"] = density_to_json(rec);
  emit(summary, o);
  write_detail(counts_to_csv(counts), o);
  return kExitOk;
}

int run_tomo_process(const Options& o) {
  Options opts = o;
  if (opts.filters.empty() && opts.waveplates.empty())
    opts.filters = {0.70, 0.20, 0.12, 0.16};
  Json summary;
  summary["scenario"] = "tomo-process";
  const FilterEnsemble f = load_filters(opts, &summary);
  const double n = (opts.samples >= 0) ? static_cast<double>(opts.samples) : 1e4;
  summary["n_per_setting"] = n;
  summary["seed"] = opts.seed;
  std::string csv;
  for (Side side : {Side::A, Side::B}) {
    const char* name = side == Side::A ? "A" : "B";
    std::optional<Rng> rng;
    if (n > 0) rng.emplace(Rng::derive(opts.seed, side == Side::A ? 0 : 1));
    const CountsRecord counts =
        simulate_process_counts(f, side, n > 0 ? n : 1e4, rng ? &*rng : nullptr);
    const ChiMatrix chi = process_tomography(counts);
    const auto fractions = branch_fractions(counts);
    const KrausCoefficients fit =
        disambiguate_kraus(fit_kraus(chi, fractions.first, fractions.second), counts);
    const ChiMatrix truth = chi_of_ensemble_side(f, side);
    Json js;
    js["noiseless"] = counts.noiseless;
    js["branch_fractions"] = {fractions.first, fractions.second};
    js["chi"] = chi_to_json(chi);
    js["kraus_fit"] = kraus_to_json(fit);
    js["process_fidelity_to_truth"] = process_fidelity(chi, truth);
    summary[std::string("side_") + name] = js;
    csv += counts_to_csv(counts);
  }
  emit(summary, opts);
  write_detail(csv, opts);
  return kExitOk;
}

int run_prep_check(const Options& o) {
  Json summary;
  summary["scenario"] = "prep-check";
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const StateParams p{i * (M_PI / 2.0) / 9.0, j / 9.0};
      const double dev = (simulate_preparation(p).matrix() - family_state(p).matrix())
                             .cwiseAbs()
                             .maxCoeff();
      worst = std::max(worst, dev);
    }
  summary["grid"] = "10x10";
  summary["max_deviation"] = worst;
  summary["pass"] = worst <= 1e-10;
  emit(summary, o);
  return worst <= 1e-10 ? kExitOk : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsteer: local-filter manipulation of two-qubit EPR steering"};
  app.require_subcommand(1);

  Options o;
  struct Scenario {
    const char* name;
    const char* help;
    std::function<int()> run;
  };
  const std::vector<Scenario> scenarios = {
      {"classify", "steering radii and configuration of a state",
       [&] { return run_classify(o); }},
      {"filter-apply", "apply a filter ensemble and classify all four branches",
       [&] { return run_filter_apply(o); }},
      {"find-filters", "search for filters realizing all four configurations",
       [&] { return run_find_filters(o, SearchGoal::AllFour, "find-filters"); }},
      {"reverse", "search for filters reversing the one-way direction",
       [&] { return run_find_filters(o, SearchGoal::Reverse, "reverse"); }},
      {"distill", "search for filters distilling steering in both directions",
       [&] { return run_find_filters(o, SearchGoal::Distill, "distill"); }},
      {"amplify", "evaluate one-way asymmetry amplification for an ensemble",
       [&] { return run_amplify(o); }},
      {"hidden-search", "Monte Carlo search for hidden steerability",
       [&] { return run_hidden_search(o); }},
      {"map", "analytic configuration map over the (theta, eta) plane",
       [&] { return run_map(o); }},
      {"tomo-state", "synthetic state tomography round trip",
       [&] { return run_tomo_state(o); }},
      {"tomo-process", "synthetic filter process tomography and Kraus fit",
       [&] { return run_tomo_process(o); }},
      {"prep-check", "two-path preparation vs the target family state",
       [&] { return run_prep_check(o); }},
  };

  std::function<int()> selected;
  for (const auto& s : scenarios) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, o);
    cmd->callback([&selected, &s] { selected = s.run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    return selected();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}
