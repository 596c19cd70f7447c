// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run `acceptance --list` for the criterion summaries or
// `acceptance --only N` to run a single one.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qsteer/hidden.hpp"
#include "qsteer/json_io.hpp"
#include "qsteer/tomography.hpp"
#include "support/lhs_oracle.hpp"
#include "support/test_util.hpp"

using namespace qsteer;

namespace {

int g_threads = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const double kSqrt3 = std::sqrt(3.0);

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// --- 1. headline one-way configuration ------------------------------------
Outcome criterion_one_way() {
  const SteeringReport rep = classify(family_state({0.452, 0.647}));
  const bool pass = rep.configuration == SteeringConfiguration::OneWayAToB &&
                    rep.r_ab > 1.0 && rep.r_ba < 1.0 &&
                    std::abs(rep.r_ab - 1.091) <= 0.05 && std::abs(rep.r_ba - 0.980) <= 0.05;
  return {pass, fmt("r_ab=%.4f (target 1.091+-0.05), r_ba=%.4f (target 0.980+-0.05), %s",
                    rep.r_ab, rep.r_ba, to_string(rep.configuration).c_str())};
}

// --- 2. Werner-state oracle ------------------------------------------------
Outcome criterion_werner_oracle() {
  SteeringSolver solver{SolverConfig{}};
  std::string detail;
  bool pass = true;
  for (double eta : {0.4, 0.6, 0.8}) {
    const Assemblage a = assemblage(werner_state(eta), MeasurementTriple::mub(), Side::A);
    const double ours = solver.radius_fixed_dirs(a);
    const double brute = oracle::radius_mub(a);
    const double expect = kSqrt3 * eta;
    pass = pass && std::abs(ours - expect) < 2e-3 && std::abs(brute - expect) < 2e-3;
    detail += fmt("eta=%.1f: %.5f/oracle %.5f vs %.5f; ", eta, ours, brute, expect);
  }
  // steerability threshold in eta by bisection on radius - 1
  double lo = 0.50, hi = 0.65;
  while (hi - lo > 5e-5) {
    const double mid = 0.5 * (lo + hi);
    const Assemblage a = assemblage(werner_state(mid), MeasurementTriple::mub(), Side::A);
    (solver.radius_fixed_dirs(a) >= 1.0 ? hi : lo) = mid;
  }
  const double eta_star = 0.5 * (lo + hi);
  pass = pass && std::abs(eta_star - 1.0 / kSqrt3) < 2e-3;
  detail += fmt("threshold eta*=%.5f vs %.5f", eta_star, 1.0 / kSqrt3);
  return {pass, detail};
}

// --- 3. analytic-window consistency -----------------------------------------
Outcome criterion_window_grid() {
  struct Point {
    double theta, eta;
  };
  // four points per region, each at least 0.02 from both boundaries
  const std::vector<Point> yellow = {{0.3, 0.40}, {0.452, 0.50}, {0.6, 0.55}, {M_PI / 4, 0.45}};
  const std::vector<Point> blue = {{0.3, 0.62}, {0.3, 0.75}, {0.452, 0.62}, {0.452, 0.63}};
  const std::vector<Point> pink = {{0.452, 0.72}, {0.6, 0.70}, {M_PI / 4, 0.65}, {M_PI / 4, 0.90}};
  bool pass = true;
  std::string detail;
  auto run = [&](const Point& p, bool want_ab, bool want_ba, const char* region) {
    const SteeringReport rep = classify(family_state({p.theta, p.eta}));
    const bool ab = rep.r_ab > 1.0, ba = rep.r_ba > 1.0;
    const bool ok = ab == want_ab && ba == want_ba;
    pass = pass && ok;
    if (!ok)
      detail += fmt("[%s theta=%.3f eta=%.3f r_ab=%.3f r_ba=%.3f] ", region, p.theta, p.eta,
                    rep.r_ab, rep.r_ba);
  };
  for (const auto& p : yellow) run(p, false, false, "yellow");
  for (const auto& p : blue) run(p, true, false, "blue");
  for (const auto& p : pink) run(p, true, true, "pink");
  if (pass) detail = "12/12 grid points match the printed predicates";
  return {pass, detail};
}

// --- 4. reversal and distillation via find-filters ---------------------------
Outcome criterion_find_filters() {
  const std::string out = "/tmp/qsteer_acceptance_ff.json";
  std::remove(out.c_str());
  const std::string cmd = std::string(QSTEER_CLI_PATH) +
                          " find-filters --theta 0.452 --eta 0.647 --seed 4 --out " + out +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  (void)rc;  // a failed search still writes its candidate list
  std::ifstream in(out);
  if (!in) return {false, "find-filters produced no output"};
  const Json j = Json::parse(in);
  std::remove(out.c_str());
  auto has_both = [](const Json& cand) {
    return cand.at("reversal").get<bool>() && cand.at("distillation").get<bool>();
  };
  bool pass = false;
  std::string detail;
  if (j.at("found").get<bool>()) {
    pass = has_both(j.at("result"));
    const auto& f = j.at("result").at("ensemble");
    detail = fmt("ensemble a=(%.3f,%.3f) b=(%.3f,%.3f), all four configurations realized",
                 f.at("a1").get<double>(), f.at("a2").get<double>(), f.at("b1").get<double>(),
                 f.at("b2").get<double>());
  } else {
    for (const auto& cand : j.at("candidates"))
      if (has_both(cand)) {
        pass = true;
        detail = "reversal+distillation branch found among verified candidates";
      }
    if (!pass) detail = "no candidate realized reversal and distillation";
  }
  return {pass, detail};
}

// --- 5. asymmetry amplification ----------------------------------------------
Outcome criterion_amplify() {
  const DensityMatrix rho = family_state({0.227, 0.798});
  const FilterEnsemble f = ensemble_from_diagonals(0.70, 0.20, 0.12, 0.16);
  SteeringSolver solver{SolverConfig{}};
  const double rab0 = solver.steering_radius(rho, SteerDirection::AToB).radius;
  const double rba0 = solver.steering_radius(rho, SteerDirection::BToA).radius;
  bool pass = false;
  std::string best;
  for (const auto& b : apply_all(rho, f)) {
    if (!b.state || b.probability < 1e-6) continue;
    const double rab = solver.steering_radius(*b.state, SteerDirection::AToB).radius;
    const double rba = solver.steering_radius(*b.state, SteerDirection::BToA).radius;
    if (rab > rab0 && rba < rba0) {
      pass = true;
      best = fmt("branch (%d,%d): r_ab %.4f->%.4f up, r_ba %.4f->%.4f down", b.branch_a,
                 b.branch_b, rab0, rab, rba0, rba);
      break;
    }
  }
  if (!pass) best = fmt("no amplifying branch (input r_ab=%.4f r_ba=%.4f)", rab0, rba0);
  return {pass, best};
}

// --- 6. no hidden steering at desk scale -------------------------------------
Outcome criterion_no_hidden() {
  const double cap = 1.0 / kSqrt3 - 0.02;
  const std::vector<StateParams> band = {
      {0.30, 0.55}, {0.40, 0.55}, {0.50, 0.52}, {0.60, 0.50}, {M_PI / 4, 0.45}};
  bool pass = true;
  std::string detail;
  for (const auto& p : band) {
    if (!(p.eta <= cap)) return {false, "state outside the unsteerable band"};
    SearchConfig cfg;
    cfg.n_samples = 1000;
    cfg.rng_seed = 1234 + static_cast<std::uint64_t>(1000 * p.theta);
    cfg.threads = g_threads;
    const SearchReport rep = hidden_search(p, cfg);
    const bool ok = rep.concurrence > 0.0 && rep.max_radius_ab <= 1.0 + 2e-3 &&
                    rep.max_radius_ba <= 1.0 + 2e-3;
    pass = pass && ok;
    detail += fmt("(%.2f,%.2f): C=%.3f max=(%.4f,%.4f); ", p.theta, p.eta, rep.concurrence,
                  rep.max_radius_ab, rep.max_radius_ba);
  }
  return {pass, detail};
}

// --- 7. filter algebra properties ---------------------------------------------
Outcome criterion_filter_algebra() {
  Rng rng(7777);
  double worst_complete = 0.0;
  for (int i = 0; i < 10000; ++i)
    worst_complete = std::max(worst_complete, sample_ensemble(rng).completeness_residual());

  double worst_psum = 0.0;
  std::vector<DensityMatrix> states;
  for (int i = 0; i < 10; ++i) states.push_back(qsteer::testing::random_density(rng, 4));
  for (int i = 0; i < 500; ++i) {
    const FilterEnsemble f = sample_ensemble(rng);
    double sum = 0.0;
    for (const auto& b : apply_all(states[i % states.size()], f)) sum += b.probability;
    worst_psum = std::max(worst_psum, std::abs(sum - 1.0));
  }

  const double s = 1.0 / std::sqrt(2.0);
  const FilterEnsemble balanced = ensemble_from_diagonals(s, s, s, s);
  double worst_balanced = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = qsteer::testing::random_density(rng, 4);
    for (const auto& b : apply_all(rho, balanced))
      worst_balanced = std::max(
          worst_balanced, (b.state->matrix() - rho.matrix()).cwiseAbs().maxCoeff());
  }
  const bool pass = worst_complete <= 1e-12 && worst_psum <= 1e-10 && worst_balanced <= 1e-12;
  return {pass, fmt("completeness %.2e, prob-sum %.2e, balanced invariance %.2e",
                    worst_complete, worst_psum, worst_balanced)};
}

// --- 8. preparation equivalence ------------------------------------------------
Outcome criterion_preparation() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const StateParams p{i * (M_PI / 2.0) / 9.0, j / 9.0};
      worst = std::max(worst, (simulate_preparation(p).matrix() - family_state(p).matrix())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  return {worst <= 1e-10, fmt("max deviation %.2e on the 10x10 grid", worst)};
}

// --- 9. tomography round trips ---------------------------------------------------
Outcome criterion_tomography() {
  const DensityMatrix truth = family_state({0.452, 0.647});
  const CountsRecord noiseless =
      simulate_state_counts(truth, state_settings36(), 1e4, nullptr);
  const double f_exact = fidelity(reconstruct_state(noiseless), truth);

  Rng rng(20260808);
  const CountsRecord noisy = simulate_state_counts(truth, state_settings36(), 1e4, &rng);
  const double f_noisy = fidelity(reconstruct_state(noisy), truth);

  const FilterEnsemble fe = ensemble_from_diagonals(0.70, 0.20, 0.12, 0.16);
  const CountsRecord pn = simulate_process_counts(fe, Side::A, 1e4, nullptr);
  const ChiMatrix chi = process_tomography(pn);
  const auto fr = branch_fractions(pn);
  const KrausCoefficients fit = disambiguate_kraus(fit_kraus(chi, fr.first, fr.second), pn);
  const ChiMatrix chi_truth = chi_of_ensemble_side(fe, Side::A);
  const double pf_exact = process_fidelity(chi, chi_truth);
  const Mat2 rec1 = kraus_matrix(fit.a1);
  const double amp_err = std::max(std::abs(rec1(0, 0).real() - 0.70),
                                  std::abs(rec1(1, 1).real() - 0.20));

  Rng rng2(424242);
  const CountsRecord pnoisy = simulate_process_counts(fe, Side::A, 1e4, &rng2);
  const ChiMatrix chi_noisy = process_tomography(pnoisy);
  const double pf_noisy = process_fidelity(chi_noisy, chi_truth);

  const bool pass = f_exact >= 0.999999 && f_noisy >= 0.995 && amp_err <= 1e-3 &&
                    pf_exact >= 0.999 && pf_noisy >= 0.95;
  return {pass,
          fmt("state fid exact %.7f / noisy %.4f; kraus err %.1e; process fid exact %.5f / "
              "noisy %.4f",
              f_exact, f_noisy, amp_err, pf_exact, pf_noisy)};
}

// --- 10. solver vs brute-force oracle ----------------------------------------------
Outcome criterion_solver_oracle() {
  Rng rng(5555);
  std::vector<DensityMatrix> states;
  for (int i = 0; i < 8; ++i) states.push_back(qsteer::testing::random_density(rng, 4));
  for (int i = 0; i < 6; ++i) states.push_back(family_state(qsteer::testing::random_params(rng)));
  for (int i = 0; i < 6; ++i) {
    const DensityMatrix base = family_state(qsteer::testing::random_params(rng));
    const auto branches = apply_all(base, qsteer::testing::random_ensemble(rng));
    bool placed = false;
    for (const auto& b : branches)
      if (!placed && b.state && b.probability > 0.05) {
        states.push_back(*b.state);
        placed = true;
      }
    if (!placed) states.push_back(base);
  }
  SteeringSolver solver{SolverConfig{}};
  double worst = 0.0;
  for (const auto& rho : states) {
    const Assemblage a = assemblage(rho, MeasurementTriple::mub(), Side::A);
    const double ours = solver.radius_fixed_dirs(a);
    const double brute = oracle::radius_mub(a);
    worst = std::max(worst, std::abs(ours - brute));
  }
  return {worst < 2e-3, fmt("20 states, worst |solver - oracle| = %.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"one-way configuration of the headline state", criterion_one_way},
      {"Werner radius against the analytic and brute-force oracles", criterion_werner_oracle},
      {"numeric steerability matches the analytic windows", criterion_window_grid},
      {"filter search finds reversal and distillation", criterion_find_filters},
      {"one-way asymmetry amplification", criterion_amplify},
      {"no hidden steering in the two-way-unsteerable band", criterion_no_hidden},
      {"filter ensemble algebra", criterion_filter_algebra},
      {"two-path preparation equals the target family", criterion_preparation},
      {"tomography round trips", criterion_tomography},
      {"steering solver agrees with the brute-force oracle", criterion_solver_oracle},
  };

  int only = 0;
  g_threads = static_cast<int>(std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) g_threads = std::atoi(argv[++i]);
    if (!std::strcmp(argv[i], "--list")) {
      for (std::size_t k = 0; k < criteria.size(); ++k)
        std::printf("%2zu. %s\n", k + 1, criteria[k].name);
      return 0;
    }
  }

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[k].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2zu. %s  [%.1f s]\n      %s\n", out.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].name, dt, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
