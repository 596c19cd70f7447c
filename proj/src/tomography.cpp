#include "qsteer/tomography.hpp"

#include <cmath>
#include <map>

#include "qsteer/detail/simplex.hpp"

namespace qsteer {

namespace {

const Complex kI(0.0, 1.0);

Eigen::Vector2cd ket(const std::string& label) {
  const double s = 1.0 / std::sqrt(2.0);
  if (label == "H") return {1.0, 0.0};
  if (label == "V") return {0.0, 1.0};
  if (label == "D") return {s, s};
  if (label == "A") return {s, -s};
  if (label == "R") return {s, s * kI};
  if (label == "L") return {s, -s * kI};
  throw std::invalid_argument("unknown polarization label: " + label);
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

long long realize(double mean, Rng* rng) {
  return rng ? rng->poisson(mean) : std::llround(mean);
}

// estimators consume exact means in noiseless mode; integer counts are kept
// for the CSV record only
double effective_count(const CountsRecord& rec, const CountEntry& e) {
  return rec.noiseless ? e.expected : static_cast<double>(e.count);
}

// projection of eigenvalues onto the probability simplex
Eigen::VectorXd simplex_project(Eigen::VectorXd v) {
  Eigen::VectorXd u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int k = 0;
  for (int i = 0; i < u.size(); ++i) {
    cum += u(i);
    const double t = (cum - 1.0) / (i + 1);
    if (u(i) - t > 0.0) {
      tau = t;
      k = i + 1;
    }
  }
  (void)k;
  return (v.array() - tau).cwiseMax(0.0);
}

// chi -> sum_mn chi_mn sigma_n^+ sigma_m (the trace-preservation image)
Mat2 tp_image(const Eigen::Matrix4cd& chi) {
  Mat2 out = Mat2::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) out += chi(m, n) * (pauli(n).adjoint() * pauli(m));
  return out;
}

// adjoint of the trace-preservation map: Y -> [Tr(sigma_m sigma_n Y)]_mn
Eigen::Matrix4cd tp_adjoint(const Mat2& y) {
  Eigen::Matrix4cd out;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) out(m, n) = (pauli(m) * pauli(n) * y).trace();
  return out;
}

// coordinates of a Hermitian 2x2 matrix in the Pauli frame
Eigen::Vector4d herm2_coords(const Mat2& h) {
  Eigen::Vector4d c;
  for (int b = 0; b < 4; ++b) c(b) = 0.5 * (pauli(b) * h).trace().real();
  return c;
}

Mat2 herm2_from_coords(const Eigen::Vector4d& c) {
  Mat2 out = Mat2::Zero();
  for (int b = 0; b < 4; ++b) out += c(b) * pauli(b);
  return out;
}

// projection onto the affine set {chi : tp_image(chi) = I}
Eigen::Matrix4cd project_tp(const Eigen::Matrix4cd& chi) {
  static const Eigen::Matrix4d gram_inv = [] {
    Eigen::Matrix4d g;
    for (int b = 0; b < 4; ++b) {
      const Eigen::Matrix4cd adj = tp_adjoint(pauli(b));
      const Mat2 img = tp_image(adj);
      g.col(b) = herm2_coords(img);
    }
    return Eigen::Matrix4d(g.inverse());
  }();
  const Mat2 residual = tp_image(chi) - Mat2::Identity();
  const Eigen::Vector4d y = gram_inv * herm2_coords(residual);
  return chi - tp_adjoint(herm2_from_coords(y));
}

Eigen::Matrix4cd project_psd(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(hermitize(m));
  const Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Vector4d unit4_from_angles(const double* t) {
  return {std::cos(t[0]), std::sin(t[0]) * std::cos(t[1]),
          std::sin(t[0]) * std::sin(t[1]) * std::cos(t[2]),
          std::sin(t[0]) * std::sin(t[1]) * std::sin(t[2])};
}

}  // namespace

Mat2 projector1q(const std::string& label) {
  const Eigen::Vector2cd k = ket(label);
  return k * k.adjoint();
}

Mat2 prep_state1q(const std::string& label) {
  if (label != "H" && label != "V" && label != "D" && label != "R")
    throw std::invalid_argument("preparation label must be one of H,V,D,R");
  return projector1q(label);
}

const std::vector<std::string>& projector_labels6() {
  static const std::vector<std::string> l = {"H", "V", "D", "A", "R", "L"};
  return l;
}

const std::vector<std::string>& prep_labels4() {
  static const std::vector<std::string> l = {"H", "V", "D", "R"};
  return l;
}

std::vector<std::string> state_settings16() {
  std::vector<std::string> out;
  for (const auto& a : prep_labels4())
    for (const auto& b : prep_labels4()) out.push_back(a + b);
  return out;
}

std::vector<std::string> state_settings36() {
  std::vector<std::string> out;
  for (const auto& a : projector_labels6())
    for (const auto& b : projector_labels6()) out.push_back(a + b);
  return out;
}

CountsRecord simulate_state_counts(const DensityMatrix& rho,
                                   const std::vector<std::string>& settings,
                                   double n_per_setting, Rng* rng) {
  if (!rho.two_qubit()) throw std::invalid_argument("state counts expect a two-qubit state");
  if (n_per_setting < 1.0) throw std::invalid_argument("n_per_setting must be >= 1");
  CountsRecord rec;
  rec.n_per_setting = n_per_setting;
  rec.noiseless = (rng == nullptr);
  for (const auto& s : settings) {
    if (s.size() != 2) throw std::invalid_argument("two-qubit setting label must be a pair");
    const ComplexMatrix proj =
        tensor(projector1q(s.substr(0, 1)), projector1q(s.substr(1, 1)));
    const double p = std::clamp((proj * rho.matrix()).trace().real(), 0.0, 1.0);
    CountEntry e;
    e.prep = "-";
    e.proj = s;
    e.port = "C";
    e.expected = n_per_setting * p;
    e.count = realize(e.expected, rng);
    rec.entries.push_back(std::move(e));
  }
  return rec;
}

CountsRecord simulate_process_counts(const FilterEnsemble& f, Side side,
                                     double n_per_setting, Rng* rng) {
  if (n_per_setting < 1.0) throw std::invalid_argument("n_per_setting must be >= 1");
  CountsRecord rec;
  rec.n_per_setting = n_per_setting;
  rec.noiseless = (rng == nullptr);
  for (const auto& prep : prep_labels4()) {
    const Mat2 rho_in = prep_state1q(prep);
    for (const auto& proj : projector_labels6()) {
      const Mat2 pr = projector1q(proj);
      for (int branch = 1; branch <= 2; ++branch) {
        const Mat2 fb = f.op(side, branch);
        const double p = std::clamp((pr * fb * rho_in * fb.adjoint()).trace().real(), 0.0, 1.0);
        CountEntry e;
        e.prep = prep;
        e.proj = proj;
        e.port = std::to_string(branch);
        e.expected = n_per_setting * p;
        e.count = realize(e.expected, rng);
        rec.entries.push_back(std::move(e));
      }
    }
  }
  return rec;
}

DensityMatrix reconstruct_state(const CountsRecord& counts) {
  std::vector<const CountEntry*> rows;
  for (const auto& e : counts.entries)
    if (e.port == "C" && e.proj.size() == 2) rows.push_back(&e);
  if (rows.size() < 16)
    throw std::invalid_argument("state reconstruction needs at least 16 settings");
  if (counts.n_per_setting < 1.0) throw std::invalid_argument("invalid counts record");

  // rho = sum_mn c_mn sigma_m x sigma_n / 4; solve for c from frequencies
  Eigen::MatrixXd design(rows.size(), 16);
  Eigen::VectorXd freq(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& e = *rows[r];
    const ComplexMatrix proj =
        tensor(projector1q(e.proj.substr(0, 1)), projector1q(e.proj.substr(1, 1)));
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        design(r, 4 * m + n) = 0.25 * (proj * tensor(pauli(m), pauli(n))).trace().real();
    freq(r) = effective_count(counts, e) / counts.n_per_setting;
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(freq);
  if (!c.allFinite()) throw std::invalid_argument("singular tomography design matrix");

  ComplexMatrix rho_lin = ComplexMatrix::Zero(4, 4);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) rho_lin += 0.25 * c(4 * m + n) * tensor(pauli(m), pauli(n));
  rho_lin = hermitize(rho_lin);

  // project onto the PSD unit-trace cone
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_lin);
  const Eigen::VectorXd vals = simplex_project(es.eigenvalues());
  ComplexMatrix rho =
      es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(hermitize(rho));
}

ChiMatrix::ChiMatrix(Eigen::Matrix4cd m, bool validate) : m_(std::move(m)) {
  if (!validate) return;
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("chi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("chi matrix is not positive semidefinite");
  if (trace_preservation_residual() > 1e-8)
    throw std::invalid_argument("chi matrix is not trace preserving");
}

double ChiMatrix::trace_preservation_residual() const {
  return (tp_image(m_) - Mat2::Identity()).cwiseAbs().maxCoeff();
}

std::pair<double, double> branch_fractions(const CountsRecord& counts) {
  double n1 = 0.0, n2 = 0.0;
  for (const auto& e : counts.entries) {
    if (e.port == "1") n1 += effective_count(counts, e);
    if (e.port == "2") n2 += effective_count(counts, e);
  }
  const double total = n1 + n2;
  if (total <= 0.0) throw std::invalid_argument("counts record has no port counts");
  return {n1 / total, n2 / total};
}

ChiMatrix process_tomography(const CountsRecord& counts) {
  // summed-port frequencies indexed by (prep, projector)
  std::map<std::pair<std::string, std::string>, double> freq;
  for (const auto& e : counts.entries) {
    if (e.port != "1" && e.port != "2") continue;
    freq[{e.prep, e.proj}] += effective_count(counts, e) / counts.n_per_setting;
  }
  if (freq.size() < 24) throw std::invalid_argument("incomplete process tomography design");

  // single-qubit output states E(rho_prep) by linear inversion
  std::array<Mat2, 4> outputs;
  for (std::size_t j = 0; j < prep_labels4().size(); ++j) {
    const auto& prep = prep_labels4()[j];
    auto get = [&](const char* p) {
      const auto it = freq.find({prep, std::string(p)});
      if (it == freq.end()) throw std::invalid_argument("missing projector counts for " + prep);
      return it->second;
    };
    const double fh = get("H"), fv = get("V"), fd = get("D"), fa = get("A"), fr = get("R"),
                 fl = get("L");
    Eigen::Vector4d coords;
    coords << (fh + fv + fd + fa + fr + fl) / 3.0, fd - fa, fr - fl, fh - fv;
    outputs[j] = 0.5 * herm2_from_coords(coords);
  }

  // least squares for chi in a Hermitian basis: 16 real unknowns
  std::vector<Eigen::Matrix4cd> basis;
  for (int m = 0; m < 4; ++m) {
    Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
    b(m, m) = 1.0;
    basis.push_back(b);
  }
  for (int m = 0; m < 4; ++m)
    for (int n = m + 1; n < 4; ++n) {
      Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
      b(m, n) = 1.0;
      b(n, m) = 1.0;
      basis.push_back(b);
      b(m, n) = kI;
      b(n, m) = -kI;
      basis.push_back(b);
    }

  Eigen::MatrixXd design(16, 16);
  Eigen::VectorXd target(16);
  for (int j = 0; j < 4; ++j) {
    const Mat2 rho_in = prep_state1q(prep_labels4()[j]);
    const Eigen::Vector4d out_coords = herm2_coords(outputs[j]);
    for (int beta = 0; beta < 4; ++beta) {
      target(4 * j + beta) = out_coords(beta);
      for (std::size_t p = 0; p < basis.size(); ++p) {
        Mat2 img = Mat2::Zero();
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n)
            if (basis[p](m, n) != Complex(0, 0))
              img += basis[p](m, n) * pauli(m) * rho_in * pauli(n).adjoint();
        design(4 * j + beta, static_cast<int>(p)) = herm2_coords(img)(beta);
      }
    }
  }
  const Eigen::VectorXd theta = design.colPivHouseholderQr().solve(target);
  if (!theta.allFinite()) throw std::invalid_argument("singular process tomography design");

  Eigen::Matrix4cd chi = Eigen::Matrix4cd::Zero();
  for (std::size_t p = 0; p < basis.size(); ++p) chi += theta(static_cast<int>(p)) * basis[p];
  chi = 0.5 * (chi + chi.adjoint());

  // Dykstra alternating projections onto PSD and the trace-preserving set
  Eigen::Matrix4cd x = chi;
  Eigen::Matrix4cd p_corr = Eigen::Matrix4cd::Zero(), q_corr = Eigen::Matrix4cd::Zero();
  for (int it = 0; it < 2000; ++it) {
    const Eigen::Matrix4cd y = project_psd(x + p_corr);
    p_corr = x + p_corr - y;
    x = project_tp(y + q_corr);
    q_corr = y + q_corr - x;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(x, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > -1e-10 &&
        (tp_image(x) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-10)
      break;
  }
  // final nudge inside both tolerance bands
  x = project_psd(x);
  x = project_tp(x);
  x = project_psd(x);
  return ChiMatrix(0.5 * (x + x.adjoint()));
}

Mat2 kraus_matrix(const Eigen::Vector4d& coeffs) {
  Mat2 out = Mat2::Zero();
  for (int m = 0; m < 4; ++m) out += coeffs(m) * pauli(m);
  return out;
}

Eigen::Vector4d pauli_coefficients(const Mat2& op) {
  Eigen::Vector4d c;
  for (int m = 0; m < 4; ++m) c(m) = 0.5 * (pauli(m) * op).trace().real();
  return c;
}

KrausCoefficients fit_kraus(const ChiMatrix& chi, double fraction1, double fraction2) {
  if (std::abs(fraction1 + fraction2 - 1.0) > 0.05)
    throw std::invalid_argument("branch fractions must sum to ~1");
  const double f1 = std::max(fraction1, 0.0);
  const double f2 = std::max(fraction2, 0.0);
  const Eigen::Matrix4d s =
      0.5 * (chi.matrix().real() + chi.matrix().real().transpose());

  auto objective_vectors = [&](const Eigen::Vector4d& a1, const Eigen::Vector4d& a2) {
    return (a1 * a1.transpose() + a2 * a2.transpose() - s).squaredNorm();
  };
  // angles: (t0,t1,t2) for each unit 4-vector, scaled by sqrt(f_b)
  auto objective = [&](const std::vector<double>& t) {
    const Eigen::Vector4d a1 = std::sqrt(f1) * unit4_from_angles(t.data());
    const Eigen::Vector4d a2 = std::sqrt(f2) * unit4_from_angles(t.data() + 3);
    return objective_vectors(a1, a2);
  };
  auto angles_of = [](const Eigen::Vector4d& u) {
    std::vector<double> t(3);
    const double r3 = std::hypot(u(2), u(3));
    const double r2 = std::hypot(u(1), r3);
    t[0] = std::atan2(r2, u(0));
    t[1] = std::atan2(r3, u(1));
    t[2] = std::atan2(u(3), u(2));
    return t;
  };

  // analytic seeds from the two leading eigenvectors of S
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(s);
  std::array<int, 4> order = {3, 2, 1, 0};  // Eigen sorts ascending
  const double l1 = std::max(es.eigenvalues()(order[0]), 0.0);
  const double l2 = std::max(es.eigenvalues()(order[1]), 0.0);
  const Eigen::Vector4d v1 = es.eigenvectors().col(order[0]);
  const Eigen::Vector4d v2 = es.eigenvectors().col(order[1]);
  double sin2 = (l1 - l2 > 1e-14) ? std::clamp((l1 - f1) / (l1 - l2), 0.0, 1.0) : 0.0;
  const double cphi = std::sqrt(1.0 - sin2), sphi = std::sqrt(sin2);

  std::vector<std::vector<double>> starts;
  for (double sgn : {1.0, -1.0}) {
    const Eigen::Vector4d a1 = cphi * std::sqrt(l1) * v1 + sgn * sphi * std::sqrt(l2) * v2;
    const Eigen::Vector4d a2 = -sgn * sphi * std::sqrt(l1) * v1 + cphi * std::sqrt(l2) * v2;
    const Eigen::Vector4d u1 = a1.norm() > 1e-12 ? Eigen::Vector4d(a1.normalized()) : v1;
    const Eigen::Vector4d u2 = a2.norm() > 1e-12 ? Eigen::Vector4d(a2.normalized()) : v2;
    auto t1 = angles_of(u1), t2 = angles_of(u2);
    t1.insert(t1.end(), t2.begin(), t2.end());
    starts.push_back(t1);
  }
  Rng rng(0xF17ull);
  for (int k = 0; k < 6; ++k) {
    std::vector<double> t(6);
    for (auto& v : t) v = rng.uniform(0.0, M_PI);
    starts.push_back(t);
  }

  std::vector<double> best_t;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t0 : starts) {
    const auto res = detail::nelder_mead(objective, t0, 0.3, 1e-14, 1200);
    if (res.value < best) {
      best = res.value;
      best_t = res.x;
    }
  }

  KrausCoefficients out;
  out.a1 = std::sqrt(f1) * unit4_from_angles(best_t.data());
  out.a2 = std::sqrt(f2) * unit4_from_angles(best_t.data() + 3);
  out.residual = best;
  out.poor_fit = best > 1e-2;

  // At a fraction tie any orthogonal mixing of the branches preserves chi and
  // both norms; pick the representative closest to the nonnegative-diagonal
  // model class (no off-diagonals, no sign-split diagonals).
  if (std::abs(f1 - f2) <= 1e-9) {
    auto mix_penalty = [&](double psi) {
      const Eigen::Vector4d b1 = std::cos(psi) * out.a1 + std::sin(psi) * out.a2;
      const Eigen::Vector4d b2 = -std::sin(psi) * out.a1 + std::cos(psi) * out.a2;
      double p = 0.0;
      for (const Eigen::Vector4d& v : {b1, b2}) {
        const Mat2 f = kraus_matrix(v);
        p += std::norm(f(0, 1)) + std::norm(f(1, 0));
        p += std::max(0.0, -f(0, 0).real() * f(1, 1).real());
      }
      return p;
    };
    double best_psi = 0.0, best_pen = mix_penalty(0.0);
    for (int k = -90; k <= 90; ++k) {
      const double psi = k * M_PI / 180.0;
      const double p = mix_penalty(psi);
      if (p < best_pen - 1e-15) {
        best_pen = p;
        best_psi = psi;
      }
    }
    const Eigen::Vector4d b1 =
        std::cos(best_psi) * out.a1 + std::sin(best_psi) * out.a2;
    const Eigen::Vector4d b2 =
        -std::sin(best_psi) * out.a1 + std::cos(best_psi) * out.a2;
    out.a1 = b1;
    out.a2 = b2;
  }

  // Branch order follows the port fractions (the norm constraints tie a_b to
  // port b); only a fraction tie leaves the order free, resolved by the
  // larger leading diagonal entry. Branch signs are global phases, fixed to a
  // nonnegative leading entry.
  auto leading = [](const Eigen::Vector4d& a) {
    const Mat2 f = kraus_matrix(a);
    return std::abs(f(0, 0).real()) > 1e-9 ? f(0, 0).real() : f(1, 1).real();
  };
  if (std::abs(f1 - f2) <= 1e-9 && leading(out.a2) > leading(out.a1) + 1e-12)
    std::swap(out.a1, out.a2);
  if (leading(out.a1) < 0.0) out.a1 = -out.a1;
  if (leading(out.a2) < 0.0) out.a2 = -out.a2;
  return out;
}

KrausCoefficients disambiguate_kraus(const KrausCoefficients& fit,
                                     const CountsRecord& counts) {
  // (chi, fractions) cannot tell a diagonal pair from its X-conjugated
  // partner (both branches flipped); the port-resolved counts can.
  auto flip = [](Eigen::Vector4d a) {
    a(2) = -a(2);
    a(3) = -a(3);
    return a;
  };
  auto score = [&](const Eigen::Vector4d& a1, const Eigen::Vector4d& a2) {
    const Mat2 fb[2] = {kraus_matrix(a1), kraus_matrix(a2)};
    double sse = 0.0;
    for (const auto& e : counts.entries) {
      if (e.port != "1" && e.port != "2") continue;
      const Mat2& f = fb[e.port == "1" ? 0 : 1];
      const Mat2 rho_in = prep_state1q(e.prep);
      const Mat2 pr = projector1q(e.proj);
      const double pred =
          counts.n_per_setting * (pr * f * rho_in * f.adjoint()).trace().real();
      const double diff = pred - effective_count(counts, e);
      sse += diff * diff;
    }
    return sse;
  };
  KrausCoefficients out = fit;
  if (score(flip(fit.a1), flip(fit.a2)) < score(fit.a1, fit.a2)) {
    out.a1 = flip(fit.a1);
    out.a2 = flip(fit.a2);
  }
  auto leading = [](const Eigen::Vector4d& a) {
    const Mat2 f = kraus_matrix(a);
    return std::abs(f(0, 0).real()) > 1e-9 ? f(0, 0).real() : f(1, 1).real();
  };
  if (leading(out.a1) < 0.0) out.a1 = -out.a1;
  if (leading(out.a2) < 0.0) out.a2 = -out.a2;
  return out;
}

double process_fidelity(const ChiMatrix& a, const ChiMatrix& b) {
  const Eigen::Matrix4cd ma = a.matrix() / a.matrix().trace().real();
  const Eigen::Matrix4cd mb = b.matrix() / b.matrix().trace().real();
  return detail::uhlmann_fidelity(ma, mb);
}

ChiMatrix chi_of_ensemble_side(const FilterEnsemble& f, Side side) {
  const Eigen::Vector4d a1 = pauli_coefficients(f.op(side, 1));
  const Eigen::Vector4d a2 = pauli_coefficients(f.op(side, 2));
  const Eigen::Matrix4d chi = a1 * a1.transpose() + a2 * a2.transpose();
  return ChiMatrix(chi.cast<Complex>());
}

}  // namespace qsteer
