// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/channel.hpp"

#include <cmath>

#include "d2dee/errors.hpp"

namespace d2dee::channel {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void LognormalLinkParams::validate() const {
  if (!(distance_m > 0)) throw ContractViolation("LognormalLinkParams: distance_m must be > 0");
  if (!(pathloss_alpha > 0)) throw ContractViolation("LognormalLinkParams: pathloss_alpha must be > 0");
  if (!(shadow_sigma_db >= 0)) throw ContractViolation("LognormalLinkParams: shadow_sigma_db must be >= 0");
  if (!(tx_power_w > 0)) throw ContractViolation("LognormalLinkParams: tx_power_w must be > 0");
  if (!(noise_w > 0)) throw ContractViolation("LognormalLinkParams: noise_w must be > 0");
  if (!std::isfinite(pathloss_norm_g_db)) throw ContractViolation("LognormalLinkParams: G must be finite");
}

void RayleighLinkParams::validate() const {
  if (!(distance_m > 0 && pathloss_alpha > 0 && tx_power_w > 0 && noise_w > 0))
    throw ContractViolation("RayleighLinkParams: all fields must be > 0");
}

SnrSample SnrSample::from_db(double db, Hop hop) { return {db, db_to_linear(db), hop}; }
SnrSample SnrSample::from_linear(double linear, Hop hop) {
  return {linear_to_db(linear), linear, hop};
}

double mean_snr_db(const LognormalLinkParams& p) {
  p.validate();
  return -10.0 * p.pathloss_alpha * std::log10(p.distance_m) + p.pathloss_norm_g_db +
         10.0 * std::log10(p.tx_power_w / p.noise_w);
}

double mean_d2d_snr(const RayleighLinkParams& p) {
  p.validate();
  return std::pow(p.distance_m, -p.pathloss_alpha) * p.tx_power_w / p.noise_w;
}

SnrSample sample_bs_snr(const LognormalLinkParams& p, RandomStream& rng) {
  const double mean = mean_snr_db(p);
  if (p.shadow_sigma_db == 0.0) return SnrSample::from_db(mean, Hop::ToBaseStation);
  return SnrSample::from_db(mean + p.shadow_sigma_db * rng.normal(), Hop::ToBaseStation);
}

SnrSample sample_d2d_snr(const RayleighLinkParams& p, RandomStream& rng) {
  double fade = rng.exponential();
  while (fade <= 0.0) fade = rng.exponential();
  return SnrSample::from_linear(mean_d2d_snr(p) * fade, Hop::DeviceToDevice);
}

}  // namespace d2dee::channel
