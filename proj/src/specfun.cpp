// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "d2dee/errors.hpp"

namespace d2dee::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite argument");
}

// Maclaurin series of erfi, summed for |x| so every term is positive and
// there is no cancellation; erfi is odd.
double erfi_series(double x) {
  const double x2 = x * x;
  double power = std::fabs(x);  // |x|^(2n+1)/n!
  double sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double term = power / (2 * n + 1);
    sum += term;
    if (term < kEps * sum) break;
    power *= x2 / (n + 1);
  }
  return std::copysign(2.0 / std::sqrt(std::numbers::pi) * sum, x);
}

// Dawson's integral F(x) by Rybicki's exponentially convergent sampling sum.
// Step h = 0.2 puts the discretisation error near exp(-(pi/2h)^2) ~ 1e-27.
double dawson_rybicki(double x) {
  constexpr double h = 0.2;
  constexpr int kTerms = 24;
  static const std::array<double, kTerms> coeff = [] {
    std::array<double, kTerms> c{};
    for (int i = 0; i < kTerms; ++i) {
      const double t = (2 * i + 1) * h;
      c[i] = std::exp(-t * t);
    }
    return c;
  }();
  const double ax = std::fabs(x);
  const int n0 = 2 * static_cast<int>(std::lround(0.5 * ax / h));
  const double xp = ax - n0 * h;
  double e1 = std::exp(2.0 * xp * h);
  const double e2 = e1 * e1;
  double d1 = n0 + 1;
  double d2 = d1 - 2.0;
  double sum = 0.0;
  for (int i = 0; i < kTerms; ++i) {
    sum += coeff[i] * (e1 / d1 + 1.0 / (d2 * e1));
    d1 += 2.0;
    d2 -= 2.0;
    e1 *= e2;
  }
  return std::copysign(std::exp(-xp * xp) * sum / std::sqrt(std::numbers::pi), x);
}

double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;  // (-x)^n / n!
  for (int n = 1; n < 200; ++n) {
    term *= -x / n;
    const double add = term / n;
    sum += add;
    if (std::fabs(add) < kEps * std::fabs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// Modified Lentz evaluation of the continued fraction for E1, valid for x > 1.
double e1_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h * std::exp(-x);
  }
  throw NumericError("E1 continued fraction did not converge", std::fabs(h));
}

double ei_series(double x) {
  double sum = 0.0;
  double term = 1.0;  // x^n / n!
  for (int n = 1; n < 500; ++n) {
    term *= x / n;
    const double add = term / n;
    sum += add;
    if (add < kEps * std::fabs(sum)) break;
  }
  return kEulerGamma + std::log(x) + sum;
}

// sum_k k!/x^k truncated at its smallest term; x >= 40 gives ~1e-17 accuracy.
double ei_asymptotic_factor(double x) {
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

constexpr double kEiSwitch = 40.0;

}  // namespace

double q_function(double x) {
  require_finite(x, "q_function");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_bound(double x, ApproxKind kind, const ExpPolyCoefficients& c) {
  require_finite(x, "q_bound");
  switch (kind) {
    case ApproxKind::Exact:
      return q_function(x);
    case ApproxKind::ChernoffUpper:
      if (x < 0) throw DomainError("q_bound: Chernoff bounds require x >= 0");
      return 0.5 * std::exp(-0.5 * x * x);
    case ApproxKind::ChernoffLower:
      if (x < 0) throw DomainError("q_bound: Chernoff bounds require x >= 0");
      return kChernoffLowerKappa * std::exp(-x * x);
    case ApproxKind::ExpPolyApprox:
      return std::exp(c.q1 * x * x + c.q2 * x + c.q3);
  }
  throw DomainError("q_bound: unknown kind");
}

double erfi_scaled(double x) {
  require_finite(x, "erfi_scaled");
  if (std::fabs(x) <= 3.0) return erfi_series(x) * std::exp(-x * x);
  return 2.0 / std::sqrt(std::numbers::pi) * dawson_rybicki(x);
}

double erfi(double x) {
  require_finite(x, "erfi");
  if (std::fabs(x) > kErfiMaxArgument) throw RangeError("erfi: |x| > 26 overflows");
  if (std::fabs(x) <= 3.0) return erfi_series(x);
  return 2.0 / std::sqrt(std::numbers::pi) * dawson_rybicki(x) * std::exp(x * x);
}

double exp_integral(double x, ExpIntegralKind kind) {
  require_finite(x, "exp_integral");
  if (x <= 0) throw DomainError("exp_integral: requires x > 0");
  if (kind == ExpIntegralKind::E1) return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
  if (x < kEiSwitch) return ei_series(x);
  if (x > 709.0) throw RangeError("exp_integral: Ei overflows for x > 709");
  return std::exp(x) / x * ei_asymptotic_factor(x);
}

double ei_scaled(double x) {
  require_finite(x, "ei_scaled");
  if (x <= 0) throw DomainError("ei_scaled: requires x > 0");
  if (x < kEiSwitch) return ei_series(x) * std::exp(-x);
  return ei_asymptotic_factor(x) / x;
}

}  // namespace d2dee::specfun
