#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsteer/filter.hpp"
#include "support/test_util.hpp"

using namespace qsteer;
using qsteer::testing::max_abs_diff;

TEST_CASE("ensemble constructors and completeness") {
  SUBCASE("amplification-experiment parameters") {
    const FilterEnsemble f = ensemble_from_diagonals(0.70, 0.20, 0.12, 0.16);
    CHECK(f.completeness_residual() < 1e-12);
    CHECK(f.op(Side::A, 1)(0, 0).real() == doctest::Approx(0.70));
    CHECK(f.op(Side::A, 2)(0, 0).real() == doctest::Approx(std::sqrt(1.0 - 0.49)));
  }
  SUBCASE("identity ensemble: branch 2 is the zero map") {
    const FilterEnsemble f = ensemble_from_diagonals(1, 1, 1, 1);
    CHECK(max_abs_diff(f.op(Side::A, 1), Mat2::Identity()) < 1e-15);
    CHECK(f.op(Side::A, 2).norm() < 1e-15);
  }
  SUBCASE("balanced ensemble: all branches I/sqrt(2)") {
    const double s = 1.0 / std::sqrt(2.0);
    const FilterEnsemble f = ensemble_from_diagonals(s, s, s, s);
    for (int b : {1, 2})
      for (Side side : {Side::A, Side::B})
        CHECK(max_abs_diff(f.op(side, b), s * Mat2::Identity()) < 1e-12);
  }
  CHECK_THROWS_AS(ensemble_from_diagonals(1.1, 0.5, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ensemble_from_diagonals(0.5, -0.1, 0.5, 0.5), std::invalid_argument);

  SUBCASE("completeness across random ensembles") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i)
      CHECK(qsteer::testing::random_ensemble(rng).completeness_residual() < 1e-12);
  }
}

TEST_CASE("waveplate mapping") {
  SUBCASE("full transmission") {
    const FilterEnsemble f = ensemble_from_waveplates({M_PI / 4.0, 0.0, 0.0, M_PI / 4.0});
    CHECK(max_abs_diff(f.op(Side::A, 1), Mat2::Identity()) < 1e-12);
    CHECK(f.op(Side::A, 2).norm() < 1e-12);
  }
  SUBCASE("balanced at pi/8") {
    const FilterEnsemble f =
        ensemble_from_waveplates({M_PI / 8.0, M_PI / 8.0, M_PI / 8.0, M_PI / 8.0});
    CHECK(max_abs_diff(f.op(Side::A, 1), Mat2::Identity() / std::sqrt(2.0)) < 1e-12);
    CHECK(max_abs_diff(f.op(Side::A, 2), Mat2::Identity() / std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("inverse mapping reproduces the target diagonal") {
    const WaveplateAngles w{std::asin(0.20) / 2.0, std::acos(0.70) / 2.0, 0.3, 0.8};
    const FilterEnsemble f = ensemble_from_waveplates(w);
    CHECK(f.a1 == doctest::Approx(0.70).epsilon(1e-12));
    CHECK(f.a2 == doctest::Approx(0.20).epsilon(1e-12));
  }
  SUBCASE("round trip over random ensembles") {
    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
      FilterEnsemble f;
      f.a1 = rng.uniform(0.01, 0.99);
      f.a2 = rng.uniform(0.01, 0.99);
      f.b1 = rng.uniform(0.01, 0.99);
      f.b2 = rng.uniform(0.01, 0.99);
      const FilterEnsemble back = ensemble_from_waveplates(waveplates_for(f));
      CHECK(std::abs(back.a1 - f.a1) < 1e-12);
      CHECK(std::abs(back.a2 - f.a2) < 1e-12);
      CHECK(std::abs(back.b1 - f.b1) < 1e-12);
      CHECK(std::abs(back.b2 - f.b2) < 1e-12);
    }
  }
  CHECK_THROWS_AS(ensemble_from_waveplates({-0.1, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("apply_branch") {
  Rng rng(31);
  SUBCASE("balanced ensemble leaves every state untouched at p = 1/4") {
    const double s = 1.0 / std::sqrt(2.0);
    const FilterEnsemble f = ensemble_from_diagonals(s, s, s, s);
    const DensityMatrix rho = qsteer::testing::random_density(rng, 4);
    for (int i : {1, 2})
      for (int j : {1, 2}) {
        const BranchOutcome b = apply_branch(rho, f, i, j);
        CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-12));
        REQUIRE(b.state.has_value());
        CHECK(max_abs_diff(b.state->matrix(), rho.matrix()) < 1e-12);
      }
  }
  SUBCASE("pure-state branch probability a1^2 cos^2 + a2^2 sin^2") {
    const double theta = 0.61;
    const DensityMatrix pure = family_state({theta, 1.0});
    const FilterEnsemble f = ensemble_from_diagonals(0.8, 0.3, 1.0, 1.0);
    const BranchOutcome b = apply_branch(pure, f, 1, 1);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double expect = 0.64 * c2 + 0.09 * (1.0 - c2);
    CHECK(b.probability == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("identity ensemble branch (1,1) keeps the state") {
    const DensityMatrix rho = qsteer::testing::random_density(rng, 4);
    const FilterEnsemble f = ensemble_from_diagonals(1, 1, 1, 1);
    const BranchOutcome b = apply_branch(rho, f, 1, 1);
    CHECK(b.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(b.state->matrix(), rho.matrix()) < 1e-12);
  }
  SUBCASE("degenerate branch is flagged, not normalized") {
    const DensityMatrix rho = qsteer::testing::random_density(rng, 4);
    const FilterEnsemble f = ensemble_from_diagonals(1, 1, 1, 1);
    const BranchOutcome b = apply_branch(rho, f, 2, 2);
    CHECK(b.probability <= kDegenerateBranchProb);
    CHECK_FALSE(b.state.has_value());
  }
}

TEST_CASE("apply_all") {
  Rng rng(37);
  SUBCASE("probabilities sum to one for random pairs") {
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix rho = qsteer::testing::random_density(rng, 4);
      const FilterEnsemble f = qsteer::testing::random_ensemble(rng);
      double sum = 0.0;
      for (const auto& b : apply_all(rho, f)) {
        sum += b.probability;
        if (b.state) CHECK(std::abs(b.state->matrix().trace().real() - 1.0) < 1e-10);
      }
      CHECK(std::abs(sum - 1.0) < 1e-10);
    }
  }
  SUBCASE("four identical copies under the balanced ensemble") {
    const double s = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = family_state({0.4, 0.7});
    for (const auto& b : apply_all(rho, ensemble_from_diagonals(s, s, s, s))) {
      CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(max_abs_diff(b.state->matrix(), rho.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("preparation simulator") {
  SUBCASE("matches the target family state at the headline parameters") {
    const StateParams p{0.452, 0.647};
    CHECK(max_abs_diff(simulate_preparation(p).matrix(), family_state(p).matrix()) < 1e-10);
  }
  SUBCASE("pure limit") {
    const StateParams p{0.7, 1.0};
    const Eigen::Vector4cd phi = phi_theta(0.7);
    CHECK(max_abs_diff(simulate_preparation(p).matrix(), phi * phi.adjoint()) < 1e-12);
  }
  SUBCASE("path 2 alone at theta = pi/4 is fully mixed") {
    CHECK(max_abs_diff(simulate_preparation({M_PI / 4.0, 0.0}).matrix(),
                       0.25 * Mat4::Identity()) < 1e-12);
  }
  SUBCASE("10x10 grid equivalence") {
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const StateParams p{i * (M_PI / 2.0) / 9.0, j / 9.0};
        CHECK(max_abs_diff(simulate_preparation(p).matrix(), family_state(p).matrix()) <
              1e-10);
      }
  }
}
