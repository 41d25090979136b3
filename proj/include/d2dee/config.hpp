// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace d2dee {

// Every run parameter, keyed by name with its unit in the key. Defaults
// describe the cellular scenario: devices in a 50-500 m annulus around the
// base station, 23 dBm, 200 kHz, 1 kB payloads, 20 dB interference at the BS.
struct ScenarioConfig {
  std::uint64_t seed = 20160801;
  int threads = 0;  // 0: D2DEE_THREADS or hardware concurrency

  std::string layout = "annulus";  // ring | annulus | cluster
  double ring_radius_m = 300.0;
  double annulus_r_min_m = 50.0;
  double annulus_r_max_m = 500.0;
  double cluster_radius_m = 25.0;
  int n_devices = 50;
  std::vector<int> n_sweep{15, 30, 50, 100, 150};

  double tx_power_dbm = 23.0;
  double d2d_tx_power_dbm = 23.0;
  double bandwidth_hz = 200e3;
  double payload_bits = 8192;
  double noise_psd_dbm_hz = -174.0;
  double interference_db = 20.0;
  double d2d_interference_db = 0.0;
  double pathloss_alpha = 4.0;
  double pathloss_norm_g_db = 0.0;
  double d2d_pathloss_alpha = 3.0;
  double sigma_db = 4.0;
  double gamma_th_db = 3.0;
  double pckt_min_w = 0.1;
  double pckt_max_w = 0.2;
  bool power_control = false;
  double power_min_w = 1e-3;
  double power_max_w = 0.2;

  double rtr_tx_uj = 11.60;
  double rtr_rx_uj = 4.50;
  double ctr_tx_uj = 3.35;
  double ctr_rx_uj = 1.30;
  double csi_uj = 0.0;
  double dec_uj = 0.0;
  double enc_uj = 0.0;
  bool zero_overhead = false;

  double tau_max_s = 1e-3;
  double tau_th_s = 50e-6;
  double collision_window_s = 10e-6;
  double energy_scale_j = 0.0;  // 0: median direct energy from a calibration pass

  double d2d_range_m = 50.0;
  bool whole_network = false;

  int replications = 100;
  int slots_per_replication = 1000;
  bool battery_mode = false;
  double battery_mwh = 0.72;
  int max_depletion_slots = 1000000;

  long mc_trials = 100000;
  int m_segments = 4;
  double c_max = 0.99;
  int n_closed_form_max = 60;
  std::string direct_upper_form = "partial_fraction";
  double corollary_z_max = 10.0;
  double q1 = -0.4920;
  double q2 = -0.2287;
  double q3 = -1.1893;
  double d2d_gamma_th_linear = 2.0;
  double d2d_gamma_max_factor = 10.0;
  int series_terms = 40;

  void validate() const;  // throws ConfigError naming the offending key
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::string& path);
// Applies one key = value assignment; throws ConfigError on unknown keys or bad values.
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                      int line = 0);
// Canonical "key = value" listing, one per line, in a fixed order.
std::string config_to_text(const ScenarioConfig& cfg);
// Same listing with a short description above each key.
std::string defaults_dump();
std::vector<std::string> config_keys();

}  // namespace d2dee
