// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/bounds.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>

#include "d2dee/errors.hpp"
#include "d2dee/quadrature.hpp"

namespace d2dee::bounds {

using specfun::q_function;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kRelaxed = 1e-6;
// 10 log10(3.86): above this SNR, 10log10(1+g) <= 1 + 10log10(g).
const double kLowerRigorousDb = 10.0 * std::log10(3.86);

double direct_coefficient(const ShadowScenario& s) {
  return s.eta1 + 0.5 * s.eta2 * (s.pckt_max_w + s.pckt_min_w);
}

double relay_coefficient(const ShadowScenario& s, double n) {
  return s.eta1 + s.eta2 * min_uniform_mean(s.pckt_min_w, s.pckt_max_w, n);
}

double log_normal_cdf(double z) {
  return z < 0 ? std::log(q_function(-z)) : std::log1p(-q_function(z));
}

double binomial(int n, int k) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

// Partial-fraction evaluation of (1/sqrt(pi)) int_0^T dt / ((g - sqrt2 s t)(1 + t^2)).
double direct_i1_partial_fraction(double g, double sigma, double th) {
  const double b = kSqrt2 * sigma;
  const double t = (g - th) / b;
  return (b * std::log(g / th) + 0.5 * b * std::log1p(t * t) + g * std::atan(t)) /
         (kSqrtPi * (g * g + b * b));
}

double direct_i1_printed(double g, double sigma, double th, bool arctan_of_square) {
  const double t = (g - th) / (kSqrt2 * sigma);
  const double pre = sigma / (std::sqrt(2 * kPi) * (2 * sigma * sigma + g * g));
  const double arc = arctan_of_square ? std::atan(t * t) : std::pow(std::atan(t), 2);
  return pre * (2 * kSqrt2 * sigma * std::log(g / th) * std::log1p(t * t) + arc);
}

// Exact value of (1/sqrt(pi)) int_0^inf exp(-t^2) / (g + sqrt2 s t) dt.
double direct_i2_exact(double g, double sigma) {
  const double c = g / (kSqrt2 * sigma);
  return (kPi * specfun::erfi_scaled(c) - specfun::ei_scaled(c * c)) /
         (2 * std::sqrt(2 * kPi) * sigma);
}

double direct_i2_printed(double g, double sigma) {
  const double c2 = g * g / (2 * sigma * sigma);
  const double c = std::sqrt(c2);
  const double logs = std::log(c2) + 4 * std::log(kSqrt2 * sigma / g) - std::log(sigma * sigma / g);
  const double e1 = specfun::exp_integral(c2, specfun::ExpIntegralKind::E1);
  return (2 * kPi * specfun::erfi_scaled(c) + std::exp(-c2) * (-2 * e1 + logs)) /
         (4 * std::sqrt(2 * kPi) * sigma);
}

// Closed form of 2^-N int_0^T dt / ((g - s t)^2 (1 + N t^2 / 2)), T = (g - th)/s.
double relay_i1_partial_fraction(double g, double sigma, double th, int n) {
  const double c = 0.5 * n;
  const double t = (g - th) / sigma;
  const double d = g * g * c + sigma * sigma;
  const double sc = std::sqrt(c);
  const double value = (sigma / d) * (1 / th - 1 / g) +
                       (2 * g * sigma * c / (d * d)) * std::log(g / th) +
                       (g * sigma * c / (d * d)) * std::log1p(c * t * t) +
                       ((g * g * c - sigma * sigma) * sc / (d * d)) * std::atan(sc * t);
  return std::ldexp(value, -n);
}

double relay_i1_printed(double g, double sigma, double th, int n) {
  const double t = (g - th) / sigma;
  const double s2 = sigma * sigma;
  const double k = 2 * s2 + n * g * g;
  const double bracket = 2 * s2 * k * (1 / th - 1 / g) + 4 * n * s2 * g * std::log(th / g) +
                         2 * n * sigma * g * std::log1p(0.5 * n * t) +
                         std::sqrt(2.0 * n) * (n * g * g - 2 * s2) * std::atan(std::sqrt(0.5 * n) * t);
  return std::ldexp(sigma / (k * k) * bracket, -n);
}

double relay_i1_bound_integral(double g, double sigma, double th, int n) {
  const double t = (g - th) / sigma;
  auto f = [&](double x) { return 1.0 / (std::pow(g - sigma * x, 2) * (1 + 0.5 * n * x * x)); };
  return std::ldexp(quad::integrate(f, 0.0, t, 1e-12).value, -n);
}

// Chernoff expansion of int_0^inf (1 - Q(x))^N / (s x + g)^2 dx.
double relay_i2_chernoff(double g, double sigma, int n) {
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double ck = binomial(n, k);
    if (k % 2 == 0)
      sum += ck * std::ldexp(psi_integral(0.5 * k, sigma, g).value, -k);
    else
      sum -= ck * std::pow(specfun::kChernoffLowerKappa, k) * psi_integral(k, sigma, g).value;
  }
  return sum;
}

double relay_i2_quadrature(double g, double sigma, int n) {
  auto f = [&](double x) { return std::exp(n * log_normal_cdf(x)) / std::pow(sigma * x + g, 2); };
  const double peak = n > 1 ? std::sqrt(2 * std::log(static_cast<double>(n))) : 0.0;
  return quad::integrate(f, {0.0, peak, peak + 3, std::numeric_limits<double>::infinity()}, 1e-12)
      .value;
}

// Approximation of sigma * I2 using Q(x) ~ exp(q1 x^2 + q2 x + q3), as printed.
double corollary_sigma_i2(double g, double sigma, int n, double zmax,
                          const specfun::ExpPolyCoefficients& q) {
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double term;
    if (k == 0) {
      term = zmax / (g * g + g * sigma * zmax);
    } else {
      const double kk = k;
      const double disc = std::sqrt(kk * kk * q.q2 * q.q2 - 4 * kk * q.q1 * q.q2 - 4 * kk * q.q1);
      const double alpha = (-kk * q.q2 + disc) / (2 * kk * q.q1);
      const double beta = (-kk * q.q2 - disc) / (2 * kk * q.q1);
      const double ga = g - alpha * sigma;
      const double gb = g - beta * sigma;
      const double a = sigma * sigma / (ga * gb);
      const double b = sigma * sigma * (alpha * sigma + beta * sigma - 2 * g) / (ga * ga * gb * gb);
      const double c = 1 / ((alpha - beta) * ga * ga);
      const double d = 1 / ((alpha - beta) * gb * gb);
      term = a * zmax / (g * g + g * sigma * zmax) + b / g * std::log1p(sigma * zmax / g) +
             c * std::log(std::fabs(1 + zmax / alpha)) + d * std::log(std::fabs(1 + zmax / beta));
    }
    sum += binomial(n, k) * (k % 2 ? -term : term);
  }
  return sigma * sum;
}

bool within(double value, double reference, Relation rel, double tol) {
  if (!std::isfinite(value)) return false;
  switch (rel) {
    case Relation::UpperBound:
      return value >= reference * (1 - tol);
    case Relation::LowerBound:
      return value <= reference * (1 + tol);
    case Relation::Equal:
    case Relation::Approximation:
      return std::fabs(value - reference) <= tol * std::fabs(reference);
  }
  return false;
}

}  // namespace

void ShadowScenario::validate() const {
  if (!(sigma_db > 0)) throw DomainError("ShadowScenario: sigma_db must be > 0");
  if (!(gamma_th_db > 0)) throw DomainError("ShadowScenario: gamma_th_db must be > 0 dB");
  if (!(pckt_min_w >= 0 && pckt_min_w <= pckt_max_w))
    throw DomainError("ShadowScenario: need 0 <= pckt_min_w <= pckt_max_w");
  if (n_devices < 1) throw DomainError("ShadowScenario: n_devices must be >= 1");
  if (!(gamma_th_db < mean_snr_db + 6 * sigma_db))
    throw DomainError("ShadowScenario: gamma_th_db must be < mean_snr_db + 6 sigma_db");
  if (!(eta1 > 0 && eta2 >= 0)) throw DomainError("ShadowScenario: need eta1 > 0, eta2 >= 0");
}

ShadowScenario ShadowScenario::from_radio(double mean_snr_db, double sigma_db, double gamma_th_db,
                                          double tx_power_w, double payload_bits,
                                          double bandwidth_hz, double pckt_min_w,
                                          double pckt_max_w, int n_devices) {
  ShadowScenario s;
  s.mean_snr_db = mean_snr_db;
  s.sigma_db = sigma_db;
  s.gamma_th_db = gamma_th_db;
  s.eta1 = 10.0 * std::log10(2.0) * tx_power_w * payload_bits / bandwidth_hz;
  s.eta2 = s.eta1 / tx_power_w;
  s.pckt_min_w = pckt_min_w;
  s.pckt_max_w = pckt_max_w;
  s.n_devices = n_devices;
  s.validate();
  return s;
}

double relay_inverse_snr_integral(double g, double sigma, double th, double n) {
  const double zth = (th - g) / sigma;
  constexpr double zmax = 10.0;
  auto f = [&](double z) {
    const double x = g + sigma * z;
    const double log_pdf = -0.5 * z * z - 0.5 * std::log(2 * kPi);
    return n / x * std::exp((n - 1) * log_normal_cdf(z) + log_pdf);
  };
  const double peak = n > 1 ? std::sqrt(2 * std::log(n)) : 0.0;
  std::vector<double> pts{zth};
  for (double p : {peak - 3, peak - 1.5, peak - 0.5, peak, peak + 0.5, peak + 1.5, peak + 3})
    if (p > pts.back() && p < zmax) pts.push_back(p);
  pts.push_back(zmax);
  return quad::integrate(f, pts, 1e-11).value;
}

BoundPair direct_bound(const ShadowScenario& s, const DirectOptions& opt) {
  s.validate();
  const double g = s.mean_snr_db, sigma = s.sigma_db, th = s.gamma_th_db;
  const double coef = direct_coefficient(s);

  BoundPair out;
  out.oracle = coef * relay_inverse_snr_integral(g, sigma, th, 1.0);

  const double sl = sigma / (g + 1);
  out.lower = coef / (g + 1) * std::exp(0.5 * sl * sl) * q_function(sl + (th - g - 1) / sigma);
  out.lower_rigorous = th >= kLowerRigorousDb;

  double i1, i2;
  switch (opt.form) {
    case DirectUpperForm::PartialFraction:
      i1 = direct_i1_partial_fraction(g, sigma, th);
      i2 = direct_i2_exact(g, sigma);
      break;
    case DirectUpperForm::PrintedArctanOfSquare:
      i1 = direct_i1_printed(g, sigma, th, true);
      i2 = direct_i2_printed(g, sigma);
      break;
    default:
      i1 = direct_i1_printed(g, sigma, th, false);
      i2 = direct_i2_printed(g, sigma);
      break;
  }
  out.upper = coef * (i1 + i2);
  out.closed_form_ok = within(*out.lower, out.oracle, Relation::LowerBound, kRelaxed) &&
                       within(out.upper, out.oracle, Relation::UpperBound, kRelaxed);
  return out;
}

BoundPair relay_upper_bound(const ShadowScenario& s, RelayMethod method, const RelayOptions& opt) {
  s.validate();
  const int n = s.n_devices;
  const double g = s.mean_snr_db, sigma = s.sigma_db, th = s.gamma_th_db;
  const double coef = relay_coefficient(s, n);

  BoundPair out;
  out.oracle = coef * relay_inverse_snr_integral(g, sigma, th, n);
  if (method == RelayMethod::Quadrature || n > opt.n_closed_form_max) {
    out.upper = out.oracle;
    out.closed_form_ok = method == RelayMethod::Quadrature;
    return out;
  }

  const double i1 = opt.i1_form == RelayI1Form::PartialFraction
                        ? relay_i1_partial_fraction(g, sigma, th, n)
                        : relay_i1_printed(g, sigma, th, n);
  const double boundary = std::pow(q_function((g - th) / sigma), n) / th;
  if (method == RelayMethod::ClosedForm) {
    out.upper = coef * (sigma * (i1 + relay_i2_chernoff(g, sigma, n)) - boundary);
    out.closed_form_ok = within(out.upper, out.oracle, Relation::UpperBound, kRelaxed);
  } else {
    out.upper =
        coef * (sigma * i1 + corollary_sigma_i2(g, sigma, n, opt.corollary_z_max, opt.q) - boundary);
    out.closed_form_ok = within(out.upper, out.oracle, Relation::Approximation, 0.10);
  }
  return out;
}

double min_uniform_mean(double a, double b, double n) {
  if (!(a <= b)) throw DomainError("min_uniform_mean: need a <= b");
  if (!(n >= 1)) throw DomainError("min_uniform_mean: need n >= 1");
  return (b + n * a) / (1 + n);
}

double psi_quadrature(double n, double a, double b) {
  if (!(n >= 0 && a > 0 && b > 0)) throw DomainError("psi: need N >= 0, a > 0, b > 0");
  auto f = [&](double x) { return std::exp(-n * x * x) / std::pow(a * x + b, 2); };
  if (n == 0) return 1.0 / (a * b);
  const double w = 1.0 / std::sqrt(n);
  return quad::integrate(f, {0.0, std::min(w, b / a), std::max(w, b / a), 6 * w + b / a,
                             std::numeric_limits<double>::infinity()},
                         1e-12)
      .value;
}

PsiValue psi_integral(double n, double a, double b) {
  if (!(n >= 0 && a > 0 && b > 0)) throw DomainError("psi: need N >= 0, a > 0, b > 0");
  if (n == 0) return {1.0 / (a * b), true};
  const double z = b * b * n / (a * a);
  // Beyond this the leading terms cancel to fewer than ~8 significant digits.
  if (z > 1e6) return {psi_quadrature(n, a, b), false};
  const double bbn = b * b * n;
  const double logs = -bbn * std::log(a * a / bbn) + bbn * std::log(z) + 4 * bbn * std::log(a / b) -
                      2 * bbn * std::log(n);
  const double bracket = 2 * kPi * bbn * specfun::erfi_scaled(b * std::sqrt(n) / a) -
                         2 * bbn * specfun::ei_scaled(z) + 2 * a * a -
                         2 * kSqrtPi * a * b * std::sqrt(n) + std::exp(-z) * logs;
  const double value = bracket / (2 * a * a * a * b);
  if (!std::isfinite(value) || value <= 0) return {psi_quadrature(n, a, b), false};
  return {value, true};
}

std::vector<double> quarter_step_schedule(double c_max, int m_segments) {
  if (m_segments < 1) throw DomainError("schedule: need M >= 1");
  std::vector<double> c(m_segments);
  for (int m = 1; m <= m_segments; ++m) {
    const double frac = static_cast<double>(m) / m_segments;
    c[m - 1] = c_max * frac * frac;
  }
  return c;
}

ScalingBound scaling_upper_bound(const ShadowScenario& s, const std::vector<double>& c_schedule,
                                 ScalingForm form) {
  s.validate();
  if (c_schedule.empty()) throw DomainError("scaling_upper_bound: empty schedule");
  for (std::size_t i = 0; i < c_schedule.size(); ++i) {
    if (c_schedule[i] < 0 || c_schedule[i] > 1 || (i > 0 && c_schedule[i] <= c_schedule[i - 1]))
      throw DomainError("scaling_upper_bound: schedule must increase within [0, 1]");
  }
  const double n = s.n_devices;
  const double g = s.mean_snr_db, sigma = s.sigma_db;
  const double ln_n = std::log(n);
  const double coef = relay_coefficient(s, n);
  const double kappa = specfun::kChernoffLowerKappa;
  const auto m_count = c_schedule.size();
  auto delta = [&](std::size_t m) { return m == 0 ? 0.0 : std::sqrt(c_schedule[m - 1] * ln_n); };
  auto weight = [&](std::size_t m) {
    return 1.0 / (1.0 + kappa * std::pow(n, 1.0 - c_schedule[m - 1]));
  };

  const double head = std::ldexp(1.0 / s.gamma_th_db, -s.n_devices);
  const double tail = 1.0 / (g + sigma * delta(m_count));
  double body = 0.0;
  ScalingBound out;
  if (form == ScalingForm::Consistent) {
    for (std::size_t m = 1; m <= m_count; ++m)
      body += weight(m) * (1.0 / (g + sigma * delta(m - 1)) - 1.0 / (g + sigma * delta(m)));
    out.bound = coef * (head + tail + body);
  } else {
    for (std::size_t m = 1; m + 1 <= m_count; ++m) body += weight(m) / (g + sigma * delta(m - 1));
    out.bound = coef * (head + (tail + body) / sigma);
  }
  out.envelope = (s.eta1 + s.eta2 * s.pckt_min_w) / (g + sigma * std::sqrt(c_schedule.back() * ln_n));
  return out;
}

void D2dScenario::validate() const {
  if (!(mean_snr > 0 && gamma_th > 0)) throw DomainError("D2dScenario: SNRs must be > 0");
  if (!(tx_power_w > 0 && payload_bits > 0 && bandwidth_hz > 0))
    throw DomainError("D2dScenario: radio parameters must be > 0");
  if (!(pckt_min_w >= 0 && pckt_min_w <= pckt_max_w))
    throw DomainError("D2dScenario: need 0 <= pckt_min_w <= pckt_max_w");
  if (!(gamma_max() > gamma_th)) throw DomainError("D2dScenario: gamma_max must exceed gamma_th");
  if (series_terms < 1) throw DomainError("D2dScenario: series_terms must be >= 1");
}

double D2dScenario::eta1() const { return std::numbers::ln2 * tx_power_w * payload_bits / bandwidth_hz; }

double D2dScenario::coefficient() const {
  return eta1() + 0.5 * (eta1() / tx_power_w) * (pckt_max_w + pckt_min_w);
}

double d2d_quadrature(double gb, double th, double gm) {
  auto f = [&](double x) { return std::exp(-x / gb) / std::log1p(x); };
  std::vector<double> pts{th};
  for (double p : {gb, 4 * gb})
    if (p > th && p < gm) pts.push_back(p);
  pts.push_back(gm);
  return quad::integrate(f, pts, 1e-12).value / gb;
}

SeriesValue d2d_series(double gb, double th, double gm, int terms) {
  const double u_hi = std::log1p(gm), u_lo = std::log1p(th);
  auto term = [&](int k) {
    const double log_pre = 1.0 / gb - std::lgamma(k + 1.0) - (k + 1) * std::log(gb);
    const double y_hi = (k + 1) * u_hi, y_lo = (k + 1) * u_lo;
    const double t = std::exp(log_pre + y_hi) * specfun::ei_scaled(y_hi) -
                     std::exp(log_pre + y_lo) * specfun::ei_scaled(y_lo);
    return k % 2 ? -t : t;
  };
  SeriesValue out;
  for (int k = 0; k < terms; ++k) out.value += term(k);
  out.remainder = std::fabs(term(terms));
  const double rel = out.remainder / std::fabs(out.value);
  if (!std::isfinite(out.value) || !(rel <= 1e-6))
    throw NumericError("d2d_series: truncated series has not converged", rel);
  return out;
}

double d2d_series_ei_of_snr(double gb, double th, double gm, int terms) {
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    const double log_pre = -std::lgamma(k + 1.0) - (k + 1) * std::log(gb);
    const double y_hi = (k + 1) * gm, y_lo = (k + 1) * th;
    const double t = std::exp(log_pre + y_hi) * specfun::ei_scaled(y_hi) -
                     std::exp(log_pre + y_lo) * specfun::ei_scaled(y_lo);
    sum += k % 2 ? -t : t;
  }
  return sum;
}

BoundPair d2d_expected_energy(const D2dScenario& s, D2dMethod method) {
  s.validate();
  const double coef = s.coefficient();
  BoundPair out;
  out.oracle = coef * d2d_quadrature(s.mean_snr, s.gamma_th, s.gamma_max());
  switch (method) {
    case D2dMethod::Quadrature:
      out.upper = out.oracle;
      out.closed_form_ok = true;
      break;
    case D2dMethod::SeriesExact: {
      const double v = coef * d2d_series(s.mean_snr, s.gamma_th, s.gamma_max(), s.series_terms).value;
      out.lower = v;
      out.upper = v;
      out.closed_form_ok = within(v, out.oracle, Relation::Equal, 1e-4);
      break;
    }
    case D2dMethod::TheoremBounds: {
      const double gb = s.mean_snr;
      const double l = std::log1p(gb / s.gamma_th);
      out.lower = coef * (l / gb - l / (gb * gb));
      out.upper = coef * (gb / (gb + s.gamma_th) + l / (gb + s.gamma_th));
      out.lower_rigorous = true;
      out.closed_form_ok = within(*out.lower, out.oracle, Relation::LowerBound, kRelaxed) &&
                           within(out.upper, out.oracle, Relation::UpperBound, kRelaxed);
      break;
    }
  }
  return out;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::UpperBound: return "upper_bound";
    case Relation::LowerBound: return "lower_bound";
    case Relation::Approximation: return "approximation";
  }
  return "?";
}

namespace {

std::string tuple_label(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string out;
  char buf[64];
  for (const auto& [k, v] : kv) {
    std::snprintf(buf, sizeof buf, "%s%s=%g", out.empty() ? "" : " ", k, v);
    out += buf;
  }
  return out;
}

void add(std::vector<AuditRecord>& out, std::string form, std::string scenario, Relation rel,
         double closed, double reference, double tol) {
  out.push_back({std::move(form), std::move(scenario), rel, closed, reference, tol,
                 within(closed, reference, rel, tol)});
}

double safe(auto f) {
  try {
    return f();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<AuditRecord> audit_closed_forms() {
  std::vector<AuditRecord> out;
  constexpr double th = 3.0;
  const double inf = std::numeric_limits<double>::infinity();

  for (double g : {15.0, 20.0, 25.0}) {
    for (double sigma : {2.0, 4.0, 8.0}) {
      const std::string label = tuple_label({{"gbar_db", g}, {"sigma_db", sigma}, {"th_db", th}});
      ShadowScenario s;
      s.mean_snr_db = g;
      s.sigma_db = sigma;
      s.gamma_th_db = th;
      const BoundPair pf = direct_bound(s, {DirectUpperForm::PartialFraction});
      const BoundPair pa = direct_bound(s, {DirectUpperForm::PrintedArctanOfSquare});
      const BoundPair pb = direct_bound(s, {DirectUpperForm::PrintedSquareOfArctan});
      add(out, "direct_lower", label, Relation::LowerBound, *pf.lower, pf.oracle, kRelaxed);
      add(out, "direct_upper_partial_fraction", label, Relation::UpperBound, pf.upper, pf.oracle, kRelaxed);
      add(out, "direct_upper_printed_arctan_of_square", label, Relation::UpperBound, pa.upper, pa.oracle, kRelaxed);
      add(out, "direct_upper_printed_square_of_arctan", label, Relation::UpperBound, pb.upper, pb.oracle, kRelaxed);

      const double b = kSqrt2 * sigma;
      const double t = (g - th) / b;
      const double i1_ref =
          quad::integrate([&](double x) { return 1.0 / ((g - b * x) * (1 + x * x)); }, 0.0, t, 1e-12)
              .value / kSqrtPi;
      const double i2_ref =
          quad::integrate([&](double x) { return std::exp(-x * x) / (g + b * x); }, 0.0, inf, 1e-12)
              .value / kSqrtPi;
      add(out, "direct_i1_partial_fraction", label, Relation::Equal,
          direct_i1_partial_fraction(g, sigma, th), i1_ref, 1e-9);
      add(out, "direct_i1_printed_arctan_of_square", label, Relation::Equal,
          direct_i1_printed(g, sigma, th, true), i1_ref, 1e-9);
      add(out, "direct_i1_printed_square_of_arctan", label, Relation::Equal,
          direct_i1_printed(g, sigma, th, false), i1_ref, 1e-9);
      add(out, "direct_i2_exact", label, Relation::Equal, direct_i2_exact(g, sigma), i2_ref, 1e-9);
      add(out, "direct_i2_printed", label, Relation::Equal, direct_i2_printed(g, sigma), i2_ref, 1e-9);

      for (int n : {2, 10, 30}) {
        const std::string nl = label + tuple_label({{" N", n}});
        const double j_ref = relay_i1_bound_integral(g, sigma, th, n);
        add(out, "relay_i1_partial_fraction", nl, Relation::Equal,
            relay_i1_partial_fraction(g, sigma, th, n), j_ref, 1e-9);
        add(out, "relay_i1_printed", nl, Relation::Equal, relay_i1_printed(g, sigma, th, n), j_ref, 1e-9);
        const double i2_q = relay_i2_quadrature(g, sigma, n);
        add(out, "relay_i2_chernoff", nl, Relation::UpperBound,
            safe([&] { return relay_i2_chernoff(g, sigma, n); }), i2_q, kRelaxed);
        add(out, "relay_sigma_i2_corollary", nl, Relation::Approximation,
            corollary_sigma_i2(g, sigma, n, 10.0, {}), sigma * i2_q, 0.10);
        s.n_devices = n;
        const BoundPair cf = relay_upper_bound(s, RelayMethod::ClosedForm);
        add(out, "relay_upper_closed_form", nl, Relation::UpperBound, cf.upper, cf.oracle, kRelaxed);
        const BoundPair cp = relay_upper_bound(s, RelayMethod::ClosedForm, {60, RelayI1Form::Printed});
        add(out, "relay_upper_closed_form_printed_i1", nl, Relation::UpperBound, cp.upper, cp.oracle, kRelaxed);
      }
      s.n_devices = 1;
    }
  }

  const double psi_points[][3] = {{1, 1, 1},  {2, 4, 20}, {0.5, 4, 45}, {3, 1, 2},
                                  {10, 4, 20}, {30, 8, 25}, {60, 2, 25}};
  for (const auto& p : psi_points) {
    add(out, "psi_closed_form", tuple_label({{"N", p[0]}, {"a", p[1]}, {"b", p[2]}}), Relation::Equal,
        psi_integral(p[0], p[1], p[2]).value, psi_quadrature(p[0], p[1], p[2]), 1e-8);
  }

  for (double g : {15.0, 20.0, 25.0}) {
    ShadowScenario s;
    s.mean_snr_db = g;
    s.sigma_db = 4.0;
    s.gamma_th_db = th;
    const auto schedule = quarter_step_schedule(0.99, 4);
    for (int n : {100, 1000, 10000, 100000}) {
      s.n_devices = n;
      const std::string label = tuple_label({{"gbar_db", g}, {"sigma_db", 4.0}, {"N", n}});
      const double oracle = relay_upper_bound(s, RelayMethod::Quadrature).oracle;
      add(out, "scaling_consistent", label, Relation::UpperBound,
          scaling_upper_bound(s, schedule, ScalingForm::Consistent).bound, oracle, kRelaxed);
      add(out, "scaling_printed", label, Relation::UpperBound,
          scaling_upper_bound(s, schedule, ScalingForm::Printed).bound, oracle, kRelaxed);
    }
  }

  for (double gb : {10.0, 50.0, 100.0, 500.0}) {
    D2dScenario d;
    d.mean_snr = gb;
    d.gamma_th = 2.0;
    const std::string label = tuple_label({{"gbar_d", gb}, {"th_d", 2.0}, {"gmax", d.gamma_max()}});
    const double q = d2d_quadrature(gb, d.gamma_th, d.gamma_max());
    add(out, "d2d_series_log_argument", label, Relation::Equal,
        safe([&] { return d2d_series(gb, d.gamma_th, d.gamma_max(), 40).value; }), q, 1e-4);
    add(out, "d2d_series_printed", label, Relation::Equal,
        safe([&] { return d2d_series_ei_of_snr(gb, d.gamma_th, d.gamma_max(), 40); }), q, 1e-4);
    // The closed-form D2D bounds target the integral to infinity.
    const double q_inf = d2d_quadrature(gb, d.gamma_th, 200.0 * gb);
    const double l = std::log1p(gb / d.gamma_th);
    add(out, "d2d_theorem_lower", label, Relation::LowerBound, l / gb - l / (gb * gb), q_inf, kRelaxed);
    add(out, "d2d_theorem_upper", label, Relation::UpperBound,
        gb / (gb + d.gamma_th) + l / (gb + d.gamma_th), q_inf, kRelaxed);
  }
  return out;
}

}  // namespace d2dee::bounds
