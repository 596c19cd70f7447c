#include "qsteer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qsteer/detail/simplex.hpp"
#include "qsteer/rng.hpp"

namespace qsteer {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

Mat2 hermitize2(const Mat2& m) { return 0.5 * (m + m.adjoint()); }

int bit(int i, int k) { return (i >> k) & 1; }

// ---------------------------------------------------------------------------
// Inner feasibility program.
//
// In the aggregated coordinates sigma_i = p_i rho_i = (w_i I + c_i . sigma)/2
// the fit error is a convex quadratic,
//   cost = sum_{ka} [ 3/2 (W_ka - p_ka)^2 + 1/2 |C_ka - v_ka|^2 ],
// with W_ka = sum_{i in S_ka} w_i and C_ka the matching vector sums, and the
// radius bound becomes the second-order-cone constraint |c_i| <= t w_i.
// ADMM splits the quadratic+simplex part from the cone projections; the
// KKT factors are constant, so each iteration is a handful of 8x8 mat-vecs.
// ---------------------------------------------------------------------------

#ifndef QSTEER_ADMM_SIGMA
#define QSTEER_ADMM_SIGMA 0.25
#endif
#ifndef QSTEER_ADMM_EPS_SCREEN
#define QSTEER_ADMM_EPS_SCREEN 2e-6
#endif
#ifndef QSTEER_ADMM_RELAX
#define QSTEER_ADMM_RELAX 1.6
#endif
constexpr double kAdmmSigma = QSTEER_ADMM_SIGMA;
constexpr double kAdmmRelax = QSTEER_ADMM_RELAX;

struct AdmmConstants {
  Mat8 mw_inv;  // (3G + sigma I)^{-1}, G_ij = 3 - hamming(i^j)
  Vec8 mw_one;  // mw_inv * ones
  double sw;    // ones . mw_one
  Mat8 mr_inv;  // (G + sigma I)^{-1}
  int sets[6][4];
};

const AdmmConstants& admm_constants() {
  static const AdmmConstants c = [] {
    AdmmConstants k;
    Mat8 g;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const int ham = __builtin_popcount(static_cast<unsigned>(i ^ j));
        g(i, j) = 3.0 - ham;
      }
    k.mw_inv = (3.0 * g + kAdmmSigma * Mat8::Identity()).inverse();
    k.mw_one = k.mw_inv * Vec8::Ones();
    k.sw = k.mw_one.sum();
    k.mr_inv = (g + kAdmmSigma * Mat8::Identity()).inverse();
    for (int kk = 0; kk < 3; ++kk)
      for (int a = 0; a < 2; ++a) {
        int n = 0;
        for (int i = 0; i < 8; ++i)
          if (bit(i, kk) == a) k.sets[2 * kk + a][n++] = i;
      }
    return k;
  }();
  return c;
}

struct AsmData {
  double p[6];
  Vec3 v[6];
  Vec8 atp;     // A^T p
  Vec8 atv[3];  // A^T v_d

  void load(const Assemblage& a) {
    const auto& sets = admm_constants().sets;
    for (int ka = 0; ka < 6; ++ka) {
      p[ka] = a.prob(ka / 2, ka % 2);
      v[ka] = a.subnormalized_bloch(ka / 2, ka % 2);
    }
    atp.setZero();
    for (int d = 0; d < 3; ++d) atv[d].setZero();
    for (int ka = 0; ka < 6; ++ka)
      for (int m = 0; m < 4; ++m) {
        const int i = sets[ka][m];
        atp(i) += p[ka];
        for (int d = 0; d < 3; ++d) atv[d](i) += v[ka](d);
      }
  }

  double cost(const Vec8& w, const Vec8& rx, const Vec8& ry, const Vec8& rz) const {
    const auto& sets = admm_constants().sets;
    double out = 0.0;
    for (int ka = 0; ka < 6; ++ka) {
      double sw = 0, sx = 0, sy = 0, sz = 0;
      for (int m = 0; m < 4; ++m) {
        const int i = sets[ka][m];
        sw += w(i);
        sx += rx(i);
        sy += ry(i);
        sz += rz(i);
      }
      const double dw = sw - p[ka];
      const double dx = sx - v[ka](0), dy = sy - v[ka](1), dz = sz - v[ka](2);
      out += 1.5 * dw * dw + 0.5 * (dx * dx + dy * dy + dz * dz);
    }
    return out;
  }
};

// projection onto {(w, c) : |c| <= t w}
inline void cone_project(double t, double& w, double& cx, double& cy, double& cz) {
  const double s = std::sqrt(cx * cx + cy * cy + cz * cz);
  if (t <= 0.0) {
    w = std::max(w, 0.0);
    cx = cy = cz = 0.0;
    return;
  }
  if (s <= t * w) return;
  if (t * s <= -w) {
    w = cx = cy = cz = 0.0;
    return;
  }
  const double wn = (w + t * s) / (1.0 + t * t);
  const double scale = (s > 0.0) ? t * wn / s : 0.0;
  w = wn;
  cx *= scale;
  cy *= scale;
  cz *= scale;
}

struct AdmmState {
  Vec8 zw = Vec8::Constant(0.125), zx = Vec8::Zero(), zy = Vec8::Zero(), zz = Vec8::Zero();
  Vec8 uw = Vec8::Zero(), ux = Vec8::Zero(), uy = Vec8::Zero(), uz = Vec8::Zero();
};

struct AdmmOutcome {
  double value = 0.0;
  long long iterations = 0;
  bool converged = false;
  Vec8 w, rx, ry, rz;  // cone-feasible, weights normalized to 1
};

AdmmOutcome admm_solve(const AsmData& data, double t, AdmmState& st, int max_iters,
                       double eps) {
  const AdmmConstants& cst = admm_constants();
  AdmmOutcome out;
  Vec8 w, rx, ry, rz;
  for (int iter = 0; iter < max_iters; ++iter) {
    // x-step: quadratic + sum(w) = 1, closed form through constant factors
    const Vec8 rhs_w = 3.0 * data.atp + kAdmmSigma * (st.zw - st.uw);
    const Vec8 mw = cst.mw_inv * rhs_w;
    w = mw - ((cst.mw_one.dot(rhs_w) - 1.0) / cst.sw) * cst.mw_one;
    rx = cst.mr_inv * (data.atv[0] + kAdmmSigma * (st.zx - st.ux));
    ry = cst.mr_inv * (data.atv[1] + kAdmmSigma * (st.zy - st.uy));
    rz = cst.mr_inv * (data.atv[2] + kAdmmSigma * (st.zz - st.uz));

    const Vec8 zw_old = st.zw, zx_old = st.zx, zy_old = st.zy, zz_old = st.zz;

    // relaxed z-step: per-component cone projection
    for (int i = 0; i < 8; ++i) {
      double pw = kAdmmRelax * w(i) + (1.0 - kAdmmRelax) * zw_old(i) + st.uw(i);
      double px = kAdmmRelax * rx(i) + (1.0 - kAdmmRelax) * zx_old(i) + st.ux(i);
      double py = kAdmmRelax * ry(i) + (1.0 - kAdmmRelax) * zy_old(i) + st.uy(i);
      double pz = kAdmmRelax * rz(i) + (1.0 - kAdmmRelax) * zz_old(i) + st.uz(i);
      cone_project(t, pw, px, py, pz);
      st.uw(i) += kAdmmRelax * w(i) + (1.0 - kAdmmRelax) * zw_old(i) - pw;
      st.ux(i) += kAdmmRelax * rx(i) + (1.0 - kAdmmRelax) * zx_old(i) - px;
      st.uy(i) += kAdmmRelax * ry(i) + (1.0 - kAdmmRelax) * zy_old(i) - py;
      st.uz(i) += kAdmmRelax * rz(i) + (1.0 - kAdmmRelax) * zz_old(i) - pz;
      st.zw(i) = pw;
      st.zx(i) = px;
      st.zy(i) = py;
      st.zz(i) = pz;
    }

    out.iterations = iter + 1;
    if ((iter & 7) == 7 || iter + 1 == max_iters) {
      const double rp = std::max({(w - st.zw).cwiseAbs().maxCoeff(),
                                  (rx - st.zx).cwiseAbs().maxCoeff(),
                                  (ry - st.zy).cwiseAbs().maxCoeff(),
                                  (rz - st.zz).cwiseAbs().maxCoeff()});
      const double rd = kAdmmSigma * std::max({(st.zw - zw_old).cwiseAbs().maxCoeff(),
                                               (st.zx - zx_old).cwiseAbs().maxCoeff(),
                                               (st.zy - zy_old).cwiseAbs().maxCoeff(),
                                               (st.zz - zz_old).cwiseAbs().maxCoeff()});
      if (rp < eps && rd < eps) {
        out.converged = true;
        break;
      }
    }
  }
  // report the cone-feasible iterate, rescaled so the weights sum to one
  // (the cones are scale-invariant, so feasibility is preserved)
  const double s = st.zw.sum();
  const double scale = (s > 1e-12) ? 1.0 / s : 1.0;
  out.w = scale * st.zw;
  out.rx = scale * st.zx;
  out.ry = scale * st.zy;
  out.rz = scale * st.zz;
  out.value = data.cost(out.w, out.rx, out.ry, out.rz);
  return out;
}

// ---------------------------------------------------------------------------
// Direction parameterization and simplex search
// ---------------------------------------------------------------------------

Vec3 unit_from_angles(double polar, double azim) {
  const double sp = std::sin(polar);
  return Vec3(sp * std::cos(azim), sp * std::sin(azim), std::cos(polar));
}

MeasurementTriple triple_from_params(const std::vector<double>& x) {
  MeasurementTriple t;
  t.n1 = unit_from_angles(x[0], x[1]);
  t.n2 = unit_from_angles(x[2], x[3]);
  t.n3 = unit_from_angles(x[4], x[5]);
  return t;
}

std::vector<double> mub_params() { return {M_PI / 2.0, 0.0, M_PI / 2.0, M_PI / 2.0, 0.0, 0.0}; }

Eigen::Matrix3d random_rotation(Rng& rng) {
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double qx = std::sqrt(1.0 - u1) * std::sin(2.0 * M_PI * u2);
  const double qy = std::sqrt(1.0 - u1) * std::cos(2.0 * M_PI * u2);
  const double qz = std::sqrt(u1) * std::sin(2.0 * M_PI * u3);
  const double qs = std::sqrt(u1) * std::cos(2.0 * M_PI * u3);
  return Eigen::Quaterniond(qs, qx, qy, qz).toRotationMatrix();
}

std::vector<double> params_from_triple(const MeasurementTriple& t) {
  std::vector<double> x(6);
  for (int k = 0; k < 3; ++k) {
    const Vec3& n = t.dir(k);
    x[2 * k] = std::acos(std::clamp(n.z(), -1.0, 1.0));
    x[2 * k + 1] = std::atan2(n.y(), n.x());
  }
  return x;
}

constexpr double kSeedPruneMargin = 0.1;   // skip refining clearly inferior seeds
constexpr std::uint64_t kDirSeedBase = 0xD15EC7ED5EED5ULL;

}  // namespace

// ---------------------------------------------------------------------------
// Assemblage
// ---------------------------------------------------------------------------

Assemblage::Assemblage(std::array<AssemblageElement, 6> elements)
    : elements_(std::move(elements)) {
  for (int k = 0; k < 3; ++k) {
    const auto& e0 = elements_[2 * k];
    const auto& e1 = elements_[2 * k + 1];
    if (e0.setting != k || e1.setting != k || e0.outcome != 0 || e1.outcome != 1)
      throw std::invalid_argument("assemblage elements out of order");
    if (std::abs(e0.probability + e1.probability - 1.0) > 1e-10)
      throw std::invalid_argument("assemblage outcome probabilities do not sum to 1");
  }
  for (int ka = 0; ka < 6; ++ka) {
    const auto& e = elements_[ka];
    prob_[ka] = e.probability;
    const Mat2 sub = e.probability * e.state;
    const BlochVector b = bloch(sub);
    subvec_[ka] = Vec3(b.x, b.y, b.z);
  }
  Mat2 ns_ref = Mat2::Zero();
  for (int k = 0; k < 3; ++k) {
    const Mat2 sum = prob_[2 * k] * elements_[2 * k].state +
                     prob_[2 * k + 1] * elements_[2 * k + 1].state;
    if (k == 0)
      ns_ref = sum;
    else if ((sum - ns_ref).cwiseAbs().maxCoeff() > 1e-8)
      throw std::invalid_argument("assemblage violates no-signaling");
  }
}

Mat2 Assemblage::reduced_state() const {
  return prob_[0] * elements_[0].state + prob_[1] * elements_[1].state;
}

Assemblage assemblage(const DensityMatrix& rho, const MeasurementTriple& dirs, Side measuring) {
  if (!rho.two_qubit()) throw std::invalid_argument("assemblage expects a two-qubit state");
  std::array<AssemblageElement, 6> elems;
  for (int k = 0; k < 3; ++k) {
    const Vec3 n = dirs.dir(k);
    if (std::abs(n.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("measurement direction is not unit length");
    for (int a = 0; a < 2; ++a) {
      const double sign = (a == 0) ? 1.0 : -1.0;
      const Mat2 proj =
          0.5 * (Mat2::Identity() + sign * (n.x() * pauli(1) + n.y() * pauli(2) +
                                            n.z() * pauli(3)));
      const ComplexMatrix op = (measuring == Side::A) ? tensor(proj, Mat2::Identity())
                                                      : tensor(Mat2::Identity(), proj);
      const ComplexMatrix prod = op * rho.matrix();
      Mat2 sub = Mat2::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int s = 0; s < 2; ++s)
            sub(i, j) += (measuring == Side::A) ? prod(2 * s + i, 2 * s + j)
                                                : prod(2 * i + s, 2 * j + s);
      sub = hermitize2(sub);
      const double p = std::max(0.0, sub.trace().real());
      AssemblageElement e;
      e.setting = k;
      e.outcome = a;
      e.probability = p;
      if (p < 1e-12) {
        e.zero_probability = true;
        e.state = Mat2::Identity() / 2.0;
        e.probability = std::max(p, 0.0);
      } else {
        e.state = sub / p;
      }
      elems[2 * k + a] = e;
    }
  }
  return Assemblage(elems);
}

// ---------------------------------------------------------------------------
// LHS model and cost
// ---------------------------------------------------------------------------

double LHSModel::max_radius() const {
  double r = 0.0;
  for (const auto& c : components) {
    if (c.trace <= 1e-14) continue;
    r = std::max(r, c.r.norm() / c.trace);
  }
  return r;
}

double lhs_cost(const Assemblage& a, const LHSModel& m) {
  double out = 0.0;
  std::array<Mat2, 8> sigma;
  for (int i = 0; i < 8; ++i)
    sigma[i] = m.components[i].weight *
               Mat2(bloch_to_op(m.components[i].trace, m.components[i].r));
  for (int k = 0; k < 3; ++k)
    for (int o = 0; o < 2; ++o) {
      Mat2 acc = Mat2::Zero();
      double pacc = 0.0;
      for (int i = 0; i < 8; ++i)
        if (LHSModel::responds(i, k, o)) {
          acc += sigma[i];
          pacc += m.components[i].weight;
        }
      const auto& e = a.at(k, o);
      const Mat2 diff = acc - e.probability * e.state;
      out += diff.squaredNorm();
      const double dp = pacc - e.probability;
      out += dp * dp;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

struct SteeringSolver::Impl {
  AdmmState state;
  AsmData data;
  double last_radius = -1.0;
  double last_delta = 0.0;  // drift between consecutive radii, sizes the bracket
  double eps = 2e-10;  // ADMM residual target; relaxed for screening tolerances
  SolveDiagnostics diag;
};

SteeringSolver::SteeringSolver(SolverConfig cfg) : cfg_(cfg), impl_(new Impl) {
  if (!(cfg_.err > 0.0) || !(cfg_.bisection_tol > 0.0) || !(cfg_.outer_tol > 0.0))
    throw std::invalid_argument("solver tolerances must be positive");
  if (cfg_.bisection_tol >= 1e-3) impl_->eps = QSTEER_ADMM_EPS_SCREEN;
}
SteeringSolver::~SteeringSolver() = default;
SteeringSolver::SteeringSolver(SteeringSolver&&) noexcept = default;
SteeringSolver& SteeringSolver::operator=(SteeringSolver&&) noexcept = default;

const SolveDiagnostics& SteeringSolver::diagnostics() const { return impl_->diag; }

double SteeringSolver::feasibility_error(const Assemblage& a, double radius_bound,
                                         LHSModel* best) {
  if (radius_bound < 0.0) throw std::invalid_argument("radius bound must be >= 0");
  impl_->data.load(a);
  const AdmmOutcome out =
      admm_solve(impl_->data, radius_bound, impl_->state, cfg_.max_iters, impl_->eps);
  impl_->diag.inner_iterations += out.iterations;
  impl_->diag.radius_evaluations += 1;
  if (!out.converged) impl_->diag.converged = false;
  if (best) {
    for (int i = 0; i < 8; ++i) {
      auto& c = best->components[i];
      c.weight = out.w(i);
      c.trace = 1.0;
      if (out.w(i) > 1e-14)
        c.r = BlochVector{out.rx(i) / out.w(i), out.ry(i) / out.w(i), out.rz(i) / out.w(i)};
      else
        c.r = BlochVector{};
    }
  }
  return out.value;
}

double SteeringSolver::radius_fixed_dirs(const Assemblage& a, SolveDiagnostics* diag) {
  const double err = cfg_.err;
  const double tol = cfg_.bisection_tol;
  constexpr double kTMax = 4.0;

  impl_->data.load(a);
  SolveDiagnostics local;
  auto eval = [&](double t) {
    const AdmmOutcome out =
        admm_solve(impl_->data, t, impl_->state, cfg_.max_iters, impl_->eps);
    local.inner_iterations += out.iterations;
    local.radius_evaluations += 1;
    if (!out.converged) local.converged = false;
    return out.value;
  };

  // In screening configurations (coarse bisection) the t_max solve is skipped:
  // the root refinement that needs the floor is off, and every assemblage of a
  // physical state admits an exact LHS well inside the bracket.
  const bool full_precision = tol <= 5e-4;
  double floor = 0.0;
  if (full_precision) {
    floor = eval(kTMax);
    if (floor > err)
      throw std::runtime_error("steering radius bracket failure: E(t_max) > err");
  }

  double lo = 0.0, hi = kTMax;

  // bracket hint from the previous call; direction searches move slowly, so
  // the window tracks the recent drift
  const double hint = impl_->last_radius;
  if (hint > 0.0 && hint < kTMax) {
    const double window =
        std::clamp(2.0 * impl_->last_delta, std::max(4.0 * tol, 4e-3), 0.05);
    const double t_hi = std::min(kTMax, hint + window);
    if (eval(t_hi) <= err) {
      hi = t_hi;
      const double t_lo = std::max(0.0, hint - window);
      if (t_lo > 0.0) {
        if (eval(t_lo) > err)
          lo = t_lo;
        else
          hi = t_lo;  // radius dropped below the window; bisect down from here
      }
    } else {
      lo = t_hi;
      const double t_retry = std::min(kTMax, hint + 3.0 * window);
      if (t_retry > t_hi && t_retry < kTMax && eval(t_retry) <= err) hi = t_retry;
    }
  }

  double e_hi_value = -1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double e = eval(mid);
    if (e <= err) {
      hi = mid;
      e_hi_value = e;
    } else {
      lo = mid;
    }
  }

  // The threshold crossing sits below the true radius because the quadratic
  // cost is still ~err there; extrapolate the root of sqrt(E - floor), which
  // is affine in t on the infeasible ramp. Coarse-tolerance (screening)
  // solves skip this and keep the raw crossing.
  double radius = hi;
  if (full_precision) {
    const double delta = std::max(3.0 * tol, 1e-3);
    const double t1 = hi - delta;
    const double t2 = hi - 2.0 * delta;
    if (t2 > 0.0) {
      const double g1 = std::sqrt(std::max(eval(t1) - floor, 0.0));
      const double g2 = std::sqrt(std::max(eval(t2) - floor, 0.0));
      if (g2 - g1 > 1e-9) {
        const double root = t1 + g1 * (t1 - t2) / (g2 - g1);
        radius = std::clamp(root, t2, hi + 0.05);
      }
    }
  }

  if (impl_->last_radius >= 0.0)
    impl_->last_delta = std::abs(radius - impl_->last_radius);
  impl_->last_radius = radius;
  local.feasibility_error = (e_hi_value >= 0.0) ? e_hi_value : floor;
  local.feasibility_floor = floor;
  impl_->diag.inner_iterations += local.inner_iterations;
  impl_->diag.radius_evaluations += local.radius_evaluations;
  impl_->diag.feasibility_error = local.feasibility_error;
  impl_->diag.feasibility_floor = local.feasibility_floor;
  if (!local.converged) impl_->diag.converged = false;
  if (diag) *diag = local;
  return radius;
}

RadiusResult SteeringSolver::steering_radius(const DensityMatrix& rho, SteerDirection dir) {
  const Side measuring = (dir == SteerDirection::AToB) ? Side::A : Side::B;
  impl_->diag = SolveDiagnostics{};

  auto objective = [&](const std::vector<double>& x) {
    const MeasurementTriple t = triple_from_params(x);
    impl_->diag.triple_evaluations += 1;
    return -radius_fixed_dirs(assemblage(rho, t, measuring), nullptr);
  };

  struct Candidate {
    std::vector<double> x;
    double raw;
  };
  std::vector<Candidate> cands;
  cands.push_back({mub_params(), -objective(mub_params())});
  for (int s = 0; s < cfg_.outer_seeds; ++s) {
    Rng rng(Rng::derive(kDirSeedBase, static_cast<std::uint64_t>(s)));
    const Eigen::Matrix3d rot = random_rotation(rng);
    MeasurementTriple t;
    t.n1 = rot.col(0);
    t.n2 = rot.col(1);
    t.n3 = rot.col(2);
    auto x = params_from_triple(t);
    const double raw = -objective(x);
    cands.push_back({std::move(x), raw});
  }

  double best = cands.front().raw;  // the MUB value is always kept
  std::vector<double> best_x = cands.front().x;
  for (const auto& c : cands) {
    if (c.raw > best) {
      best = c.raw;
      best_x = c.x;
    }
  }

  // simplex refinement from the MUB seed, then from every seed that is still
  // competitive against the incumbent
  for (std::size_t idx = 0; idx < cands.size(); ++idx) {
    if (idx > 0 && cands[idx].raw < best - kSeedPruneMargin) continue;
    const detail::SimplexResult res =
        detail::nelder_mead(objective, cands[idx].x, 0.25, cfg_.outer_tol, cfg_.outer_evals);
    if (-res.value > best) {
      best = -res.value;
      best_x = res.x;
    }
  }

  RadiusResult out;
  out.radius = best;
  out.dirs = triple_from_params(best_x);
  // re-evaluate at the winner so the reported feasibility diagnostics and the
  // bracket hint describe the returned triple
  radius_fixed_dirs(assemblage(rho, out.dirs, measuring));
  out.diag = impl_->diag;
  return out;
}

double feasibility_error(const Assemblage& a, double radius_bound, const SolverConfig& cfg) {
  SteeringSolver s(cfg);
  return s.feasibility_error(a, radius_bound);
}

double radius_fixed_dirs(const Assemblage& a, const SolverConfig& cfg) {
  SteeringSolver s(cfg);
  return s.radius_fixed_dirs(a);
}

RadiusResult steering_radius(const DensityMatrix& rho, SteerDirection dir,
                             const SolverConfig& cfg) {
  SteeringSolver s(cfg);
  return s.steering_radius(rho, dir);
}

// ---------------------------------------------------------------------------
// Predicates and classification
// ---------------------------------------------------------------------------

double oneway_upper_bound(double theta) {
  const double s = std::sin(2.0 * theta);
  return 1.0 / std::sqrt(1.0 + 2.0 * s * s);
}

AnalyticPredicates analytic_predicates(const StateParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= M_PI / 2.0))
    throw std::invalid_argument("theta outside [0, pi/2]");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");
  AnalyticPredicates out;
  const double lower = 1.0 / std::sqrt(3.0);
  out.ab_steerable_3set = p.eta > lower;
  out.oneway_window = p.eta > lower && p.eta <= oneway_upper_bound(p.theta);
  if (p.eta <= 0.0) {
    out.ba_unsteerable_infset = true;
  } else {
    const double c = std::cos(2.0 * p.theta);
    const double rhs = (2.0 * p.eta - 1.0) / ((2.0 - p.eta) * p.eta * p.eta * p.eta);
    out.ba_unsteerable_infset = c * c >= rhs;
  }
  return out;
}

std::string to_string(SteeringConfiguration c) {
  switch (c) {
    case SteeringConfiguration::TwoWay:
      return "two-way";
    case SteeringConfiguration::OneWayAToB:
      return "one-way-A->B";
    case SteeringConfiguration::OneWayBToA:
      return "one-way-B->A";
    case SteeringConfiguration::TwoWayUnsteerable:
      return "two-way-unsteerable";
    case SteeringConfiguration::BoundaryAmbiguous:
      return "boundary-ambiguous";
  }
  return "unknown";
}

SteeringReport classify(const DensityMatrix& rho, const SolverConfig& cfg) {
  SteeringSolver solver(cfg);
  const RadiusResult ab = solver.steering_radius(rho, SteerDirection::AToB);
  const RadiusResult ba = solver.steering_radius(rho, SteerDirection::BToA);
  SteeringReport rep;
  rep.r_ab = ab.radius;
  rep.r_ba = ba.radius;
  rep.dirs_ab = ab.dirs;
  rep.dirs_ba = ba.dirs;
  rep.diag_ab = ab.diag;
  rep.diag_ba = ba.diag;
  const double margin = 2.0 * cfg.bisection_tol;
  if (std::abs(ab.radius - 1.0) <= margin || std::abs(ba.radius - 1.0) <= margin) {
    rep.configuration = SteeringConfiguration::BoundaryAmbiguous;
  } else if (ab.radius > 1.0 && ba.radius > 1.0) {
    rep.configuration = SteeringConfiguration::TwoWay;
  } else if (ab.radius > 1.0) {
    rep.configuration = SteeringConfiguration::OneWayAToB;
  } else if (ba.radius > 1.0) {
    rep.configuration = SteeringConfiguration::OneWayBToA;
  } else {
    rep.configuration = SteeringConfiguration::TwoWayUnsteerable;
  }
  return rep;
}

}  // namespace qsteer
