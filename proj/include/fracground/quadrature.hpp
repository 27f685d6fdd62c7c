#pragma once

#include <functional>

namespace fracground::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below max(abs_tol, rel_tol*|value|). Throws AccuracyError
/// when `max_intervals` is exhausted first.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals = 2000);

}  // namespace fracground::quadrature
