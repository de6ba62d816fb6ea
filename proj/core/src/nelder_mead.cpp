#include "stabrad/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace stabrad {

NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                             const NelderMeadOptions& options) {
  const Index n = x0.size();
  NelderMeadResult best{x0, kInf, 0};
  auto eval = [&](const RVector& x) {
    const double v = f(x);
    ++best.evals;
    if (v < best.f) {
      best.f = v;
      best.x = x;
    }
    return v;
  };
  if (n == 0) {
    eval(x0);
    return best;
  }

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn;
  const double delta = 1.0 - 1.0 / dn > 0.0 ? 1.0 - 1.0 / dn : 0.5;

  std::vector<RVector> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  for (Index i = 0; i < n; ++i) {
    const double h = x0[i] != 0.0 ? options.initial_step * std::max(1.0, std::abs(x0[i]))
                                  : options.initial_step;
    simplex[static_cast<std::size_t>(i + 1)][i] += h;
  }
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
    if (best.evals >= options.max_evals) return best;
    values[i] = eval(simplex[i]);
  }

  std::vector<std::size_t> order(simplex.size());
  while (best.evals < options.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t next_hi = order[order.size() - 2];

    double spread_x = 0.0;
    for (const RVector& v : simplex)
      spread_x = std::max(spread_x, (v - simplex[lo]).lpNorm<Eigen::Infinity>());
    if (std::abs(values[hi] - values[lo]) <= options.f_tol && spread_x <= options.x_tol) break;
    if (spread_x <= options.x_tol) break;

    RVector centroid = RVector::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != hi) centroid += simplex[i];
    centroid /= dn;

    const RVector xr = centroid + alpha * (centroid - simplex[hi]);
    const double fr = eval(xr);
    if (fr < values[lo]) {
      const RVector xe = centroid + beta * (xr - centroid);
      const double fe = best.evals < options.max_evals ? eval(xe) : kInf;
      if (fe < fr) {
        simplex[hi] = xe;
        values[hi] = fe;
      } else {
        simplex[hi] = xr;
        values[hi] = fr;
      }
      continue;
    }
    if (fr < values[next_hi]) {
      simplex[hi] = xr;
      values[hi] = fr;
      continue;
    }
    const bool outside = fr < values[hi];
    const RVector xc = outside ? RVector(centroid + gamma * (xr - centroid))
                               : RVector(centroid - gamma * (centroid - simplex[hi]));
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[hi])) {
      simplex[hi] = xc;
      values[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == lo) continue;
      if (best.evals >= options.max_evals) break;
      simplex[i] = simplex[lo] + delta * (simplex[i] - simplex[lo]);
      values[i] = eval(simplex[i]);
    }
  }
  return best;
}

}  // namespace stabrad
