#pragma once

#include <functional>

#include "stabrad/matrixcore.hpp"

namespace stabrad {

struct NelderMeadOptions {
  int max_evals = 500;
  double initial_step = 0.1;
  /// Stop once the simplex spread in f and in x falls below these.
  double f_tol = 1e-14;
  double x_tol = 1e-13;
};

struct NelderMeadResult {
  RVector x;
  double f = kInf;
  int evals = 0;
};

/// Derivative-free simplex minimization with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                             const NelderMeadOptions& options);

}  // namespace stabrad
