// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "d2dee/specfun.hpp"

namespace d2dee::bounds {

// Base-station hop statistics in dB. eta1 pairs with a 10*log10 SNR
// denominator: eta1 = 10 log10(2) P L / B, so E = (eta1 + eta2 Pckt) / X.
struct ShadowScenario {
  double mean_snr_db = 20.0;
  double sigma_db = 4.0;
  double gamma_th_db = 3.0;
  double eta1 = 1.0;
  double eta2 = 0.0;
  double pckt_min_w = 0.0;
  double pckt_max_w = 0.0;
  int n_devices = 1;

  void validate() const;
  static ShadowScenario from_radio(double mean_snr_db, double sigma_db, double gamma_th_db,
                                   double tx_power_w, double payload_bits, double bandwidth_hz,
                                   double pckt_min_w, double pckt_max_w, int n_devices);
};

struct BoundPair {
  std::optional<double> lower;
  double upper = 0.0;
  double oracle = 0.0;
  bool closed_form_ok = false;
  // Lower bound is guaranteed only when every admitted SNR exceeds 3.86 (5.87 dB).
  bool lower_rigorous = false;
};

// Reading of the arctan term in the direct-transmission upper bound.
enum class DirectUpperForm { PartialFraction, PrintedArctanOfSquare, PrintedSquareOfArctan };

struct DirectOptions {
  DirectUpperForm form = DirectUpperForm::PartialFraction;
};

BoundPair direct_bound(const ShadowScenario& s, const DirectOptions& opt = {});

enum class RelayMethod { ClosedForm, Corollary1Approx, Quadrature };
enum class RelayI1Form { PartialFraction, Printed };

struct RelayOptions {
  int n_closed_form_max = 60;
  RelayI1Form i1_form = RelayI1Form::PartialFraction;
  // Upper limit of the Q-approximation integral on the standardised axis (gamma_bar + z sigma dB).
  double corollary_z_max = 10.0;
  specfun::ExpPolyCoefficients q{};
};

BoundPair relay_upper_bound(const ShadowScenario& s, RelayMethod method,
                            const RelayOptions& opt = {});

// E[1 / max_i X_i] restricted to X_max >= gamma_th, by quadrature.
double relay_inverse_snr_integral(double mean_snr_db, double sigma_db, double gamma_th_db, double n);

double min_uniform_mean(double a, double b, double n);

struct PsiValue {
  double value = 0.0;
  bool closed_form_ok = false;
};
// Psi(N, a, b) = integral_0^inf exp(-N x^2) / (a x + b)^2 dx.
PsiValue psi_integral(double n, double a, double b);
double psi_quadrature(double n, double a, double b);

enum class ScalingForm { Consistent, Printed };

struct ScalingBound {
  double bound = 0.0;
  double envelope = 0.0;
};
ScalingBound scaling_upper_bound(const ShadowScenario& s, const std::vector<double>& c_schedule,
                                 ScalingForm form = ScalingForm::Consistent);
// {c_M/16, c_M/4, 9 c_M/16, c_M}: delta_m = sqrt(c_m ln N) at quarter steps of delta_M.
std::vector<double> quarter_step_schedule(double c_max, int m_segments = 4);

struct D2dScenario {
  double mean_snr = 100.0;  // linear
  double gamma_th = 2.0;    // linear
  double tx_power_w = 0.2;
  double payload_bits = 8192;
  double bandwidth_hz = 2e5;
  double pckt_min_w = 0.0;
  double pckt_max_w = 0.0;
  double gamma_max_factor = 10.0;  // integration ends at factor * mean_snr
  int series_terms = 40;

  void validate() const;
  double eta1() const;  // ln2 P L / B
  double coefficient() const;
  double gamma_max() const { return gamma_max_factor * mean_snr; }
};

enum class D2dMethod { SeriesExact, TheoremBounds, Quadrature };

struct SeriesValue {
  double value = 0.0;
  double remainder = 0.0;  // magnitude of the first omitted term
};
// Expansion in exponential integrals of ln(1 + x) arguments, normalised (coefficient 1).
SeriesValue d2d_series(double mean_snr, double gamma_th, double gamma_max, int terms);
// The expansion with Ei((k+1) x) arguments; diverges, kept for the audit.
double d2d_series_ei_of_snr(double mean_snr, double gamma_th, double gamma_max, int terms);
double d2d_quadrature(double mean_snr, double gamma_th, double gamma_max);

BoundPair d2d_expected_energy(const D2dScenario& s, D2dMethod method);

// Closed-form audit: each record compares one printed or rederived closed form
// with the quadrature of what it claims to equal or bound.
enum class Relation { Equal, UpperBound, LowerBound, Approximation };

struct AuditRecord {
  std::string form;      // short identifier, e.g. "direct_upper_printed_arctan_sq"
  std::string scenario;  // human-readable parameter tuple
  Relation relation = Relation::Equal;
  double closed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

std::vector<AuditRecord> audit_closed_forms();
const char* relation_name(Relation r);

}  // namespace d2dee::bounds
