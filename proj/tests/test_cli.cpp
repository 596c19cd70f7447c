#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "qsteer/json_io.hpp"
#include "support/test_util.hpp"

using namespace qsteer;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QSTEER_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("matrix json round trip") {
  Rng rng(101);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = qsteer::testing::random_density(rng, i % 2 ? 2 : 4);
    const ComplexMatrix back = matrix_from_json(matrix_to_json(rho.matrix()));
    CHECK((back - rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  Json bad;
  bad["dims"] = {3, 3};
  bad["re"] = std::vector<double>(9, 0.0);
  bad["im"] = std::vector<double>(9, 0.0);
  CHECK_THROWS_AS(matrix_from_json(bad), std::invalid_argument);
}

TEST_CASE("ensemble and waveplate json") {
  const FilterEnsemble f = ensemble_from_diagonals(0.7, 0.2, 0.12, 0.16);
  const FilterEnsemble back = ensemble_from_json(ensemble_to_json(f));
  CHECK(back.a1 == doctest::Approx(f.a1));
  CHECK(back.b2 == doctest::Approx(f.b2));

  const WaveplateAngles w{0.1, 0.2, 0.3, 0.4};
  const WaveplateAngles wb = waveplates_from_json(waveplates_to_json(w));
  CHECK(wb.alpha1 == doctest::Approx(w.alpha1).epsilon(1e-12));
  CHECK(wb.alpha4 == doctest::Approx(w.alpha4).epsilon(1e-12));
}

TEST_CASE("cli help and argument errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("classify --help").exit_code == 0);
  CHECK(run_cli("--definitely-not-a-flag").exit_code == 3);
  CHECK(run_cli("classify --theta 9.9 --eta 0.5").exit_code == 3);
  CHECK(run_cli("classify --state /nonexistent.json").exit_code == 3);
  CHECK(run_cli("filter-apply --theta 0.4 --eta 0.5").exit_code == 3);  // missing filters
}

TEST_CASE("cli map and prep-check") {
  const RunResult map = run_cli("map");
  CHECK(map.exit_code == 0);
  CHECK(map.output.find("theta,eta,region") == 0);
  CHECK(map.output.find("two-way-unsteerable") != std::string::npos);

  const RunResult prep = run_cli("prep-check");
  CHECK(prep.exit_code == 0);
  const Json j = Json::parse(prep.output);
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("cli tomo scenarios run noiselessly") {
  const RunResult st = run_cli("tomo-state --theta 0.452 --eta 0.647 --samples 0");
  CHECK(st.exit_code == 0);
  CHECK(Json::parse(st.output).at("fidelity_to_truth").get<double>() >= 0.999999);

  const RunResult pr = run_cli("tomo-process --samples 0");
  CHECK(pr.exit_code == 0);
  const Json jp = Json::parse(pr.output);
  CHECK(jp.at("side_A").at("process_fidelity_to_truth").get<double>() >= 0.999);
  CHECK(jp.at("side_B").at("process_fidelity_to_truth").get<double>() >= 0.999);
}

TEST_CASE("cli classify is deterministic and correct on the headline state") {
  const std::string args = "classify --theta 0.452 --eta 0.647";
  const RunResult r1 = run_cli(args);
  CHECK(r1.exit_code == 0);
  const Json j = Json::parse(r1.output);
  CHECK(j.at("report").at("configuration").get<std::string>() == "one-way-A->B");
  CHECK(j.at("report").at("r_ab").get<double>() > 1.0);
  CHECK(j.at("report").at("r_ba").get<double>() < 1.0);

  const RunResult r2 = run_cli(args);
  CHECK(r1.output == r2.output);  // byte-identical reruns
}

TEST_CASE("cli hidden-search summary and detail") {
  const std::string out = "/tmp/qsteer_test_hidden.json";
  std::remove(out.c_str());
  std::remove((out + ".csv").c_str());
  const RunResult r = run_cli(
      "hidden-search --theta 0.4 --eta 0.5 --samples 6 --seed 9 --threads 2 --full --out " +
      out);
  CHECK(r.exit_code == 0);
  const Json j = Json::parse(r.output);
  CHECK(j.at("report").at("max_radius_ab").get<double>() < 1.0 + 2e-3);
  std::ifstream csv(out + ".csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "sample,a1,a2,b1,b2,p_11,p_12,p_21,p_22,"
        "r_ab_11,r_ba_11,r_ab_12,r_ba_12,r_ab_21,r_ba_21,r_ab_22,r_ba_22");
  int data_rows = 0;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == 6);  // one row per sample
  std::remove(out.c_str());
  std::remove((out + ".csv").c_str());
}

TEST_CASE("cli state file input") {
  const std::string path = "/tmp/qsteer_test_state.json";
  {
    std::ofstream f(path);
    f << density_to_json(werner_state(0.0)).dump();
  }
  const RunResult r = run_cli("classify --state " + path);
  CHECK(r.exit_code == 0);
  CHECK(Json::parse(r.output).at("report").at("configuration").get<std::string>() ==
        "two-way-unsteerable");

  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK(run_cli("classify --state " + path).exit_code == 3);
  std::remove(path.c_str());
}
