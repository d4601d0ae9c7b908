#pragma once

#include <functional>

#include "pal/types.hpp"

namespace pal::testing {

// Central finite differences of a scalar function over a parameter vector.
inline VecX finite_diff(const std::function<double(const VecX&)>& f, VecX x,
                        double h = 1e-5) {
  VecX grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double fp = f(x);
    x[i] = saved - h;
    const double fm = f(x);
    x[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Max relative error between an analytic gradient and its finite-difference
// estimate, with an absolute floor to avoid 0/0 on dead entries.
inline double max_rel_error(const VecX& analytic, const VecX& numeric,
                            double floor = 1e-6) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

}  // namespace pal::testing
