// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "d2dee/channel.hpp"
#include "d2dee/energy.hpp"

namespace d2dee::protocol {

// Control-message energies charged per round. Defaults are the measured
// averages for 10-byte signalling at 23 dBm.
struct OverheadEnergies {
  double rtr_tx_j = 11.60e-6;
  double rtr_rx_j = 4.50e-6;
  double ctr_tx_j = 3.35e-6;
  double ctr_rx_j = 1.30e-6;
  double csi_j = 0.0;
  double dec_j = 0.0;
  double enc_j = 0.0;

  static OverheadEnergies zero() { return {0, 0, 0, 0, 0, 0, 0}; }
  void validate() const;
};

// Reference D2D data energies for a 1024-byte payload (documentation only;
// campaigns compute D2D data energy from the channel).
inline constexpr double kReferenceD2dDataTxJ = 350.5e-6;
inline constexpr double kReferenceD2dDataRxJ = 135.4e-6;

struct BackoffConfig {
  double tau_max_s = 1e-3;
  double energy_scale_j = 1.0;
  double tau_th_s = 50e-6;
  double collision_window_s = 10e-6;
  void validate() const;
};

// tau = tau_max (1 - exp(-E / E0)).
double backoff_map(double energy_j, const BackoffConfig& cfg);

enum class Reason { NoCandidates, SourceWinsContention, CtrCollision, RelaySelected };
const char* reason_name(Reason r);

struct Point {
  double x = 0.0;
  double y = 0.0;
};
double distance(const Point& a, const Point& b);

// Who can overhear whose CTR. Pairs not listed are treated as out of range.
class ContentionGraph {
 public:
  ContentionGraph() = default;
  static ContentionGraph fully_connected() {
    ContentionGraph g;
    g.full_ = true;
    return g;
  }
  bool connected(int a, int b) const;
  bool is_fully_connected() const;

 private:
  friend ContentionGraph hidden_node_filter(const std::vector<int>&, const std::vector<Point>&,
                                            double);
  bool full_ = false;
  std::unordered_map<int, int> index_;
  std::vector<char> adjacency_;
  int n_ = 0;
};

// positions are indexed by device id.
ContentionGraph hidden_node_filter(const std::vector<int>& candidates,
                                   const std::vector<Point>& positions, double d2d_range_m);

struct DeviceSnapshot {
  int id = 0;
  channel::SnrSample d2d{0.0, 1.0, channel::Hop::DeviceToDevice};  // source -> this device
  channel::SnrSample bs{0.0, 1.0, channel::Hop::ToBaseStation};    // this device -> BS
  double circuit_w = 0.0;
};

// Energy: candidates contend with consumed energy (device-select relaying).
// ChannelOnly: radiated energy at the candidate's SNR, which orders exactly
// like max-SNR opportunistic relaying.
enum class MetricKind { Energy, ChannelOnly };

enum class EventKind {
  RtrTx, RtrRx, CtrTx, CtrRx, CtrCollision, StrayCtr, Timeout, D2dData, RelayProcessing,
  RelayData, DirectData
};
const char* event_name(EventKind k);

struct TraceEvent {
  double time_s = 0.0;
  int device_id = 0;
  EventKind kind = EventKind::RtrTx;
  double energy_j = 0.0;
};

struct RoundContext {
  energy::RadioParams uplink;     // circuit power is taken per device from the snapshot
  double d2d_tx_power_w = 0.2;
  double gamma_th_linear = 0.0;   // candidates below this BS SNR stay silent
  energy::SelectionMode mode = energy::SelectionMode::SingleHop;
  MetricKind metric = MetricKind::Energy;
  OverheadEnergies oh;
  BackoffConfig backoff;
  const ContentionGraph* graph = nullptr;  // nullptr: every candidate hears every other
  std::vector<TraceEvent>* trace = nullptr;
};

struct SelectionOutcome {
  energy::Path path = energy::Path::Direct;
  std::optional<int> relay_id;
  Reason reason = Reason::NoCandidates;
  energy::EnergyBreakdown breakdown;
  double latency_s = 0.0;
  int stray_ctrs = 0;
  std::vector<std::pair<int, double>> charges;  // per device, ascending id
};

// snapshots are indexed by device id and must hold the source and every candidate.
SelectionOutcome run_selection_round(int source, const std::vector<int>& candidates,
                                     const std::vector<DeviceSnapshot>& snapshots,
                                     const RoundContext& ctx);

// Contention metric a device would use; exposed for oracle tests.
double contention_metric(const DeviceSnapshot& candidate, const DeviceSnapshot& source,
                         const RoundContext& ctx);
double source_metric(const DeviceSnapshot& source, const RoundContext& ctx);

}  // namespace d2dee::protocol
