// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace d2dee::specfun {

enum class ApproxKind { Exact, ChernoffUpper, ChernoffLower, ExpPolyApprox };

// Q(x) ~ exp(q1 x^2 + q2 x + q3), fitted for x >= 0.
struct ExpPolyCoefficients {
  double q1 = -0.4920;
  double q2 = -0.2287;
  double q3 = -1.1893;
};

// Q(x) >= kappa * exp(-x^2) for x >= 0; min of Q(x) e^{x^2} is about 0.393.
inline constexpr double kChernoffLowerKappa = 0.3885;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Upper end of the argument range accepted by erfi.
inline constexpr double kErfiMaxArgument = 26.0;

double q_function(double x);
double q_bound(double x, ApproxKind kind, const ExpPolyCoefficients& c = {});

double erfi(double x);
// exp(-x^2) * erfi(x) = (2/sqrt(pi)) * Dawson(x); finite for every real x.
double erfi_scaled(double x);

enum class ExpIntegralKind { E1, Ei };
double exp_integral(double x, ExpIntegralKind kind);
// exp(-x) * Ei(x) for x > 0, finite where Ei itself overflows.
double ei_scaled(double x);

}  // namespace d2dee::specfun
