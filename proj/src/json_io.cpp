#include "qsteer/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace qsteer {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json j;
  j["dims"] = {m.rows(), m.cols()};
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto dims = j.at("dims");
  const Eigen::Index rows = dims.at(0).get<Eigen::Index>();
  const Eigen::Index cols = dims.at(1).get<Eigen::Index>();
  if ((rows != 2 && rows != 4) || cols != rows)
    throw std::invalid_argument("matrix dims must be 2x2 or 4x4");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw std::invalid_argument("matrix entry arrays do not match dims");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = r * cols + c;
      m(r, c) = Complex(re.at(k).get<double>(), im.at(k).get<double>());
    }
  return m;
}

Json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

DensityMatrix density_from_json(const Json& j) { return DensityMatrix(matrix_from_json(j)); }

Json ensemble_to_json(const FilterEnsemble& f) {
  return Json{{"a1", f.a1}, {"a2", f.a2}, {"b1", f.b1}, {"b2", f.b2}};
}

FilterEnsemble ensemble_from_json(const Json& j) {
  return ensemble_from_diagonals(j.at("a1").get<double>(), j.at("a2").get<double>(),
                                 j.at("b1").get<double>(), j.at("b2").get<double>());
}

Json waveplates_to_json(const WaveplateAngles& w) {
  const double k = 180.0 / M_PI;
  return Json{{"alpha_deg", {k * w.alpha1, k * w.alpha2, k * w.alpha3, k * w.alpha4}}};
}

WaveplateAngles waveplates_from_json(const Json& j) {
  const auto& a = j.at("alpha_deg");
  if (a.size() != 4) throw std::invalid_argument("alpha_deg must hold four angles");
  const double k = M_PI / 180.0;
  return WaveplateAngles{k * a.at(0).get<double>(), k * a.at(1).get<double>(),
                         k * a.at(2).get<double>(), k * a.at(3).get<double>()};
}

Json triple_to_json(const MeasurementTriple& t) {
  Json j = Json::array();
  for (int k = 0; k < 3; ++k) {
    const Vec3& n = t.dir(k);
    j.push_back({n.x(), n.y(), n.z()});
  }
  return j;
}

Json diagnostics_to_json(const SolveDiagnostics& d) {
  return Json{{"inner_iterations", d.inner_iterations},
              {"radius_evaluations", d.radius_evaluations},
              {"triple_evaluations", d.triple_evaluations},
              {"feasibility_error", d.feasibility_error},
              {"feasibility_floor", d.feasibility_floor},
              {"converged", d.converged}};
}

Json steering_report_to_json(const SteeringReport& r) {
  Json j;
  j["r_ab"] = r.r_ab;
  j["r_ba"] = r.r_ba;
  j["configuration"] = to_string(r.configuration);
  j["dirs_ab"] = triple_to_json(r.dirs_ab);
  j["dirs_ba"] = triple_to_json(r.dirs_ba);
  j["diagnostics"] = {{"ab", diagnostics_to_json(r.diag_ab)},
                      {"ba", diagnostics_to_json(r.diag_ba)}};
  return j;
}

Json search_report_to_json(const SearchReport& r) {
  Json j;
  if (r.params) j["params"] = {{"theta", r.params->theta}, {"eta", r.params->eta}};
  j["concurrence"] = r.concurrence;
  j["max_radius_ab"] = r.max_radius_ab;
  j["max_radius_ba"] = r.max_radius_ba;
  j["argmax_ab"] = ensemble_to_json(r.argmax_ab);
  j["argmax_ba"] = ensemble_to_json(r.argmax_ba);
  j["samples_evaluated"] = r.samples_evaluated;
  j["branches_skipped"] = r.branches_skipped;
  j["solver_failures"] = r.solver_failures;
  Json verified = Json::array();
  for (const auto& v : r.verified) {
    verified.push_back({{"sample", v.sample_index},
                        {"branch", {v.branch_a, v.branch_b}},
                        {"probability", v.probability},
                        {"r_ab", v.r_ab},
                        {"r_ba", v.r_ba},
                        {"ensemble", ensemble_to_json(v.ensemble)}});
  }
  j["verified_top"] = verified;
  return j;
}

Json chi_to_json(const ChiMatrix& chi) { return matrix_to_json(chi.matrix()); }

Json kraus_to_json(const KrausCoefficients& k) {
  Json j;
  j["a1"] = {k.a1(0), k.a1(1), k.a1(2), k.a1(3)};
  j["a2"] = {k.a2(0), k.a2(1), k.a2(2), k.a2(3)};
  const Mat2 f1 = kraus_matrix(k.a1);
  const Mat2 f2 = kraus_matrix(k.a2);
  j["f1_diag"] = {f1(0, 0).real(), f1(1, 1).real()};
  j["f2_diag"] = {f2(0, 0).real(), f2(1, 1).real()};
  j["residual"] = k.residual;
  j["poor_fit"] = k.poor_fit;
  return j;
}

std::string counts_to_csv(const CountsRecord& c) {
  std::string out = "prep,projector,port,count,N\n";
  for (const auto& e : c.entries) {
    out += e.prep + "," + e.proj + "," + e.port + "," + std::to_string(e.count) + "," +
           fmt(c.n_per_setting) + "\n";
  }
  return out;
}

std::string region_rows_to_csv(const std::vector<RegionRow>& rows) {
  std::string out = "theta,eta,region\n";
  for (const auto& r : rows)
    out += fmt(r.theta) + "," + fmt(r.eta) + "," + to_string(r.region) + "\n";
  return out;
}

std::string search_rows_to_csv(const std::vector<SampleRow>& rows) {
  // one row per sampled ensemble; skipped branches have empty radius cells
  std::string out =
      "sample,a1,a2,b1,b2,p_11,p_12,p_21,p_22,"
      "r_ab_11,r_ba_11,r_ab_12,r_ba_12,r_ab_21,r_ba_21,r_ab_22,r_ba_22\n";
  auto cell = [](double v) { return std::isnan(v) ? std::string() : fmt(v); };
  for (const auto& r : rows) {
    out += std::to_string(r.sample_index) + "," + fmt(r.ensemble.a1) + "," +
           fmt(r.ensemble.a2) + "," + fmt(r.ensemble.b1) + "," + fmt(r.ensemble.b2);
    for (int b = 0; b < 4; ++b) out += "," + fmt(r.branch_probability[b]);
    for (int b = 0; b < 4; ++b) out += "," + cell(r.r_ab[b]) + "," + cell(r.r_ba[b]);
    out += "\n";
  }
  return out;
}

}  // namespace qsteer
