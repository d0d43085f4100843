#pragma once

// Nelder-Mead simplex minimization with standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace sdc {

struct SimplexOptions {
  double tol = 1e-9;               // stop when max f - min f over the simplex <= tol
  std::size_t max_iterations = 2000;
  double initial_step = 0.5;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, const SimplexOptions& opts = {}) {
  const std::size_t n = x0.size();
  SimplexResult res;
  if (n == 0) {
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);
  res.evaluations = n + 1;

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double t, std::vector<double>& out, std::size_t worst) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // stable: ties keep the earlier vertex first
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (fv[worst] - fv[best] <= opts.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iterations) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[i]][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    along(-1.0, trial, worst);
    const double fr = f(trial);
    ++res.evaluations;
    if (fr < fv[best]) {
      along(-2.0, trial2, worst);
      const double fe = f(trial2);
      ++res.evaluations;
      if (fe < fr) {
        pts[worst] = trial2;
        fv[worst] = fe;
      } else {
        pts[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    // contraction: outside if the reflected point beats the worst, inside otherwise
    const bool outside = fr < fv[worst];
    along(outside ? -0.5 : 0.5, trial2, worst);
    const double fc = f(trial2);
    ++res.evaluations;
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t j = 0; j < n; ++j) p[j] = pts[best][j] + 0.5 * (p[j] - pts[best][j]);
      fv[order[i]] = f(p);
    }
    res.evaluations += n;
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  res.value = *it;
  res.x = pts[static_cast<std::size_t>(it - fv.begin())];
  return res;
}

}  // namespace sdc
