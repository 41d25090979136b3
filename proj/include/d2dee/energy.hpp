// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "d2dee/channel.hpp"

namespace d2dee::energy {

struct RadioParams {
  double tx_power_w = 0.2;
  double circuit_power_w = 0.1;
  double payload_bits = 8192;
  double bandwidth_hz = 2e5;

  void validate() const;
  // ln2 * P * L / B: energy numerator for a natural-log rate.
  double eta1() const;
  // eta1 / P.
  double eta2() const;
};

enum class Path { Direct, Relayed };

struct EnergyBreakdown {
  double data_tx_j = 0.0;
  double circuit_j = 0.0;
  double overhead_j = 0.0;
  double total_j = 0.0;
  Path path = Path::Direct;
};

struct HopEnergy {
  double data_tx_j = 0.0;
  double circuit_j = 0.0;
  bool below_threshold = false;  // set when the SNR is under the supplied threshold
  double total() const { return data_tx_j + circuit_j; }
};

// (P + Pckt) L / (B log2(1 + gamma)), split into radiated and circuit parts.
HopEnergy direct_energy(const channel::SnrSample& snr, const RadioParams& p,
                        double gamma_th_linear = 0.0);
// Same physical energy written with natural logs; requires a device-to-device sample.
HopEnergy d2d_energy(const channel::SnrSample& snr, const RadioParams& p,
                     double gamma_th_linear = 0.0);

// Airtime of one payload at the Shannon rate.
double transmission_time_s(const channel::SnrSample& snr, const RadioParams& p);

struct PowerInterval {
  double min_w = 1e-3;
  double max_w = 0.2;
};

// Minimiser of (P + Pckt) / log(1 + gP) over the interval. Interior roots
// satisfy (1 + gP) ln(1 + gP) = g (P + Pckt).
double optimal_power(double g, double pckt_w, const PowerInterval& interval);
double energy_per_payload_at_power(double g, double power_w, double pckt_w, double payload_bits,
                                   double bandwidth_hz);

enum class SelectionMode { DualHop, SingleHop };

double selection_metric(double e_second_hop, double e_d2d, double e_overhead, SelectionMode mode);

// Energy bookkeeping on a 2^-44 J grid. Integer sums make every total
// independent of summation order, so per-device charges add up to the
// breakdown bit for bit.
enum class Category { Data, Circuit, Overhead };

class EnergyLedger {
 public:
  static constexpr double kQuantumJ = 0x1.0p-44;

  void charge(int device_id, Category category, double joules);
  void charge(int device_id, const HopEnergy& hop);

  EnergyBreakdown breakdown(Path path) const;
  // Per-device totals, ascending device id.
  std::vector<std::pair<int, double>> per_device() const;

  static std::int64_t to_quanta(double joules);
  static double from_quanta(std::int64_t q) { return static_cast<double>(q) * kQuantumJ; }
  static double quantize(double joules) { return from_quanta(to_quanta(joules)); }

 private:
  std::map<int, std::array<std::int64_t, 3>> charges_;
};

}  // namespace d2dee::energy
