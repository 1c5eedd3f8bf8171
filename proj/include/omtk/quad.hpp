#pragma once

#include <functional>
#include <vector>

namespace omtk {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // absolute error estimate
  int evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (15 point) on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-9, double abs_tol = 0.0,
                              int max_subdivisions = 2000);

// Integral of a spectrum with narrow resonances: each peak (center, half
// width) is integrated with the arctangent substitution that flattens a
// Lorentzian, the remainder on linear panels between peaks.
QuadResult integrate_peaked(const std::function<double(double)>& f, double a, double b,
                            const std::vector<std::pair<double, double>>& peaks,
                            double rel_tol = 1e-9);

}  // namespace omtk
