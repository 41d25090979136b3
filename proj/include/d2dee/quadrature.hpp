// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "d2dee/errors.hpp"

namespace d2dee::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive 61-point Gauss-Kronrod over consecutive breakpoints. Infinite ends
// are allowed at the outer limits. Throws NumericError when the estimated
// error exceeds max(abs_tol, rel_tol * L1 norm).
template <class F>
Result integrate(F f, const std::vector<double>& points, double rel_tol = 1e-11,
                 double abs_tol = 0.0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  Result r;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) continue;
    double err = 0.0, piece_l1 = 0.0;
    r.value += GK::integrate(f, points[i], points[i + 1], 25, rel_tol * 1e-1, &err, &piece_l1);
    r.error += err;
    l1 += piece_l1;
  }
  const double allowed = std::max(abs_tol, rel_tol * l1);
  if (!std::isfinite(r.value) || r.error > allowed) {
    std::ostringstream os;
    os << "quadrature did not converge: error estimate " << r.error << " > " << allowed;
    throw NumericError(os.str(), r.error);
  }
  return r;
}

template <class F>
Result integrate(F f, double a, double b, double rel_tol = 1e-11, double abs_tol = 0.0) {
  return integrate(f, std::vector<double>{a, b}, rel_tol, abs_tol);
}

}  // namespace d2dee::quad
