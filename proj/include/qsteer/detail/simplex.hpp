#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace qsteer::detail {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

// Nelder-Mead minimization with standard coefficients. Stops when the value
// spread falls below tol or the evaluation budget is exhausted.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& x0, double step, double tol,
                                 int max_evals) {
  const int n = static_cast<int>(x0.size());
  struct Vertex {
    std::vector<double> x;
    double v;
  };
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  std::vector<Vertex> s;
  s.push_back({x0, eval(x0)});
  for (int i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += step;
    s.push_back({std::move(x), 0.0});
    s.back().v = eval(s.back().x);
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.v < b.v; };
  while (evals < max_evals) {
    std::sort(s.begin(), s.end(), by_value);
    if (s.back().v - s.front().v < tol) break;
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < n; ++d) centroid[d] += s[i].x[d] / n;
    auto blend = [&](double c) {
      std::vector<double> x(n);
      for (int d = 0; d < n; ++d) x[d] = centroid[d] + c * (centroid[d] - s.back().x[d]);
      return x;
    };
    const auto xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < s.front().v) {
      const auto xe = blend(2.0);
      const double fe = eval(xe);
      if (fe < fr)
        s.back() = {xe, fe};
      else
        s.back() = {xr, fr};
    } else if (fr < s[n - 1].v) {
      s.back() = {xr, fr};
    } else {
      const auto xc = blend(-0.5);
      const double fc = eval(xc);
      if (fc < s.back().v) {
        s.back() = {xc, fc};
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < n; ++d) s[i].x[d] = 0.5 * (s[i].x[d] + s[0].x[d]);
          s[i].v = eval(s[i].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_value);
  return {s.front().x, s.front().v, evals};
}

}  // namespace qsteer::detail
