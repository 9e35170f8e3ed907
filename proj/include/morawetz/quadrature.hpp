#pragma once

#include <cmath>
#include <functional>

namespace morawetz {

// Adaptive Simpson on [a, b]. Used for the oracle-grade 1D integrals that
// back the delta-constant and closed-form checks; deliberately independent
// of any PDE grid.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

}  // namespace morawetz
