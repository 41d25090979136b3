// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "d2dee/bounds.hpp"
#include "d2dee/config.hpp"
#include "d2dee/protocol.hpp"
#include "d2dee/rng.hpp"

namespace d2dee::sim {

struct Device {
  int id = 0;
  protocol::Point position;
  double circuit_w = 0.0;
  double battery_j = 0.0;
  bool alive() const { return battery_j > 0.0; }
};

// Every device at the same distance from the base station; angles are random.
struct RingLayout {
  double radius_m = 300.0;
};
// Area-uniform in r_min <= r <= r_max.
struct AnnulusLayout {
  double r_min_m = 50.0;
  double r_max_m = 500.0;
};
// A hotspot: the centre is area-uniform in the annulus shrunk by the cluster
// radius, devices are area-uniform in the disk around it.
struct ClusterLayout {
  double r_min_m = 50.0;
  double r_max_m = 500.0;
  double radius_m = 25.0;
};
using Layout = std::variant<RingLayout, AnnulusLayout, ClusterLayout>;

Layout layout_from_config(const ScenarioConfig& cfg);
std::string layout_name(const Layout& layout);

// Positions and circuit powers; batteries start full at battery_j.
std::vector<Device> generate_network(int n, const Layout& layout, double pckt_min_w,
                                     double pckt_max_w, double battery_j, RandomStream& rng);

enum class Scheme { DsrSingleHop, DsrDualHop, OrSingleHop, OrDualHop, Direct };
const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws ConfigError
std::vector<Scheme> all_schemes();

// Physical constants derived once from a config.
struct LinkBudget {
  double tx_power_w = 0.2;
  double d2d_tx_power_w = 0.2;
  double bs_noise_w = 0.0;   // thermal plus interference at the base station
  double d2d_noise_w = 0.0;  // thermal plus interference at a device
  double gamma_th_linear = 1.0;
  static LinkBudget from_config(const ScenarioConfig& cfg);
};

struct ReplicationSummary {
  double energy_j = 0.0;
  long long slots = 0;
  long long relayed = 0;
};

struct CampaignResult {
  Scheme scheme = Scheme::Direct;
  int n_devices = 0;
  std::string layout;
  double mean_energy_j = 0.0;
  double mean_energy_stderr = 0.0;
  double energy_efficiency_bpj = 0.0;
  double energy_efficiency_stderr = 0.0;
  double n_tx_until_depletion = 0.0;  // NaN outside battery mode
  double n_tx_until_depletion_stderr = 0.0;
  double relay_fraction = 0.0;
  double relay_fraction_stderr = 0.0;
  // Campaign totals; mean_energy_j = total_energy_j / slots.
  double total_energy_j = 0.0;
  double delivered_bits = 0.0;
  long long slots = 0;
  int replications = 0;
  std::vector<ReplicationSummary> per_replication;  // for paired comparisons
};

// Per-slot record used by tests comparing schemes on common random numbers.
struct SlotRecord {
  int source = 0;
  int relay = -1;  // -1: direct path
  double energy_j = 0.0;
};

// Base-station statistics of a device at ring_radius_m, as used by the bounds.
bounds::ShadowScenario shadow_scenario(const ScenarioConfig& cfg, int n_devices);

// Runs cfg.replications independent replications on cfg.threads workers.
// Results are bit-identical for any worker count.
CampaignResult run_campaign(const ScenarioConfig& cfg, Scheme scheme, int n_devices);

// One replication in slot mode with a per-slot log; for inspection and tests.
std::vector<SlotRecord> replay_slots(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                                     int replication, int slots);

// Battery mode for a single replication: slots until the first device empties.
long long depletion_experiment(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                               int replication);

// Back-off energy scale: median direct energy over devices of this layout.
double calibrate_energy_scale(const ScenarioConfig& cfg);

// Contention events of the first slots of replication 0.
struct TracedSlot {
  int slot = 0;
  int source = 0;
  protocol::SelectionOutcome outcome;
  std::vector<protocol::TraceEvent> events;
};
std::vector<TracedSlot> protocol_trace(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                                       int slots);

// Monte Carlo estimates for the analytical bounds.
struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long trials = 0;
};

// Direct energy with SNR X ~ N(mean, sigma) dB and the physical rate
// log2(1 + 10^(X/10)). Draws below the threshold are repeated, so the mean is
// conditional on transmitting.
McEstimate mc_direct_energy(const bounds::ShadowScenario& s, long trials, std::uint64_t seed,
                            int threads = 0);
// Energy of the best of n_devices relays, each with its own circuit power;
// a trial with every relay below the threshold is repeated.
McEstimate mc_relay_energy(const bounds::ShadowScenario& s, long trials, std::uint64_t seed,
                           int threads = 0);
// D2D energy with exponential SNR of the given mean. A draw below the
// threshold contributes zero, so the mean is the unconditional integral.
McEstimate mc_d2d_energy(const bounds::D2dScenario& s, long trials, std::uint64_t seed,
                         int threads = 0);
// Mean of min(U_1..U_n), U uniform on [a, b].
McEstimate mc_min_uniform(double a, double b, int n, long trials, std::uint64_t seed);

int resolve_threads(int requested);

}  // namespace d2dee::sim
