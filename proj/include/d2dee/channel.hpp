// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dee/rng.hpp"

namespace d2dee::channel {

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);

// Device to base-station link: path loss G R^-alpha with log-normal shadowing.
struct LognormalLinkParams {
  double distance_m = 300.0;
  double pathloss_alpha = 4.0;
  double pathloss_norm_g_db = 0.0;
  double tx_power_w = 0.2;
  double noise_w = 1e-15;  // noise plus interference seen at the base station
  double shadow_sigma_db = 4.0;
  void validate() const;
};

// Device to device link: path loss r^-alpha_d with unit-mean exponential fading.
struct RayleighLinkParams {
  double distance_m = 25.0;
  double pathloss_alpha = 3.0;
  double tx_power_w = 0.2;
  double noise_w = 1e-15;
  void validate() const;
};

enum class Hop { ToBaseStation, DeviceToDevice };

struct SnrSample {
  double value_db = 0.0;
  double value_linear = 1.0;
  Hop hop = Hop::ToBaseStation;

  static SnrSample from_db(double db, Hop hop);
  static SnrSample from_linear(double linear, Hop hop);
};

double mean_snr_db(const LognormalLinkParams& p);
double mean_d2d_snr(const RayleighLinkParams& p);

SnrSample sample_bs_snr(const LognormalLinkParams& p, RandomStream& rng);
SnrSample sample_d2d_snr(const RayleighLinkParams& p, RandomStream& rng);

}  // namespace d2dee::channel
