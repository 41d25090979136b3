// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "d2dee/errors.hpp"

namespace d2dee::protocol {

using energy::Category;
using energy::EnergyLedger;
using energy::Path;

void OverheadEnergies::validate() const {
  for (double v : {rtr_tx_j, rtr_rx_j, ctr_tx_j, ctr_rx_j, csi_j, dec_j, enc_j})
    if (!(v >= 0)) throw ContractViolation("OverheadEnergies: all terms must be >= 0");
}

void BackoffConfig::validate() const {
  if (!(tau_max_s > 0 && tau_th_s > 0 && collision_window_s >= 0 && energy_scale_j > 0))
    throw ContractViolation("BackoffConfig: need tau_max, tau_th, E0 > 0 and window >= 0");
}

double backoff_map(double energy_j, const BackoffConfig& cfg) {
  if (!(energy_j >= 0)) throw DomainError("backoff_map: energy must be >= 0");
  return -cfg.tau_max_s * std::expm1(-energy_j / cfg.energy_scale_j);
}

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::NoCandidates: return "no_candidates";
    case Reason::SourceWinsContention: return "source_wins";
    case Reason::CtrCollision: return "ctr_collision";
    case Reason::RelaySelected: return "relay_selected";
  }
  return "?";
}

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::RtrTx: return "rtr_tx";
    case EventKind::RtrRx: return "rtr_rx";
    case EventKind::CtrTx: return "ctr_tx";
    case EventKind::CtrRx: return "ctr_rx";
    case EventKind::CtrCollision: return "ctr_collision";
    case EventKind::StrayCtr: return "stray_ctr";
    case EventKind::Timeout: return "timeout";
    case EventKind::D2dData: return "d2d_data";
    case EventKind::RelayProcessing: return "relay_processing";
    case EventKind::RelayData: return "relay_data";
    case EventKind::DirectData: return "direct_data";
  }
  return "?";
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool ContentionGraph::connected(int a, int b) const {
  if (full_ || a == b) return true;
  const auto ia = index_.find(a), ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end()) return false;
  return adjacency_[static_cast<std::size_t>(ia->second) * n_ + ib->second] != 0;
}

bool ContentionGraph::is_fully_connected() const {
  return full_ || std::all_of(adjacency_.begin(), adjacency_.end(), [](char c) { return c != 0; });
}

ContentionGraph hidden_node_filter(const std::vector<int>& candidates,
                                   const std::vector<Point>& positions, double d2d_range_m) {
  ContentionGraph g;
  g.n_ = static_cast<int>(candidates.size());
  g.adjacency_.assign(static_cast<std::size_t>(g.n_) * g.n_, 0);
  for (int i = 0; i < g.n_; ++i) {
    const int id = candidates[i];
    if (id < 0 || static_cast<std::size_t>(id) >= positions.size())
      throw ContractViolation("hidden_node_filter: no position for candidate");
    g.index_[id] = i;
  }
  for (int i = 0; i < g.n_; ++i)
    for (int j = 0; j < g.n_; ++j)
      g.adjacency_[static_cast<std::size_t>(i) * g.n_ + j] =
          distance(positions[candidates[i]], positions[candidates[j]]) <= d2d_range_m;
  return g;
}

namespace {

const DeviceSnapshot& lookup(const std::vector<DeviceSnapshot>& snapshots, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= snapshots.size() || snapshots[id].id != id)
    throw ContractViolation("run_selection_round: missing snapshot for device " + std::to_string(id));
  return snapshots[id];
}

energy::RadioParams with_circuit(energy::RadioParams p, double circuit_w) {
  p.circuit_power_w = circuit_w;
  return p;
}

energy::RadioParams d2d_radio(const RoundContext& ctx, double circuit_w) {
  energy::RadioParams p = ctx.uplink;
  p.tx_power_w = ctx.d2d_tx_power_w;
  p.circuit_power_w = circuit_w;
  return p;
}

double radiated_energy(double snr_linear, const RoundContext& ctx) {
  return ctx.uplink.tx_power_w * ctx.uplink.payload_bits /
         (ctx.uplink.bandwidth_hz * std::log2(1.0 + snr_linear));
}

struct Contender {
  double tau;
  int id;
};

}  // namespace

double source_metric(const DeviceSnapshot& source, const RoundContext& ctx) {
  if (ctx.metric == MetricKind::ChannelOnly) return radiated_energy(source.bs.value_linear, ctx);
  return energy::direct_energy(source.bs, with_circuit(ctx.uplink, source.circuit_w)).total();
}

double contention_metric(const DeviceSnapshot& candidate, const DeviceSnapshot& source,
                         const RoundContext& ctx) {
  if (ctx.metric == MetricKind::ChannelOnly) {
    const double snr = ctx.mode == energy::SelectionMode::SingleHop
                           ? candidate.bs.value_linear
                           : std::min(candidate.bs.value_linear, candidate.d2d.value_linear);
    return radiated_energy(snr, ctx);
  }
  const double second_hop =
      energy::direct_energy(candidate.bs, with_circuit(ctx.uplink, candidate.circuit_w)).total();
  const double first_hop =
      energy::d2d_energy(candidate.d2d, d2d_radio(ctx, source.circuit_w)).total();
  const double relay_overhead = ctx.oh.ctr_tx_j + ctx.oh.csi_j + ctx.oh.dec_j + ctx.oh.enc_j;
  return energy::selection_metric(second_hop, first_hop, relay_overhead, ctx.mode);
}

SelectionOutcome run_selection_round(int source, const std::vector<int>& candidates,
                                     const std::vector<DeviceSnapshot>& snapshots,
                                     const RoundContext& ctx) {
  const DeviceSnapshot& src = lookup(snapshots, source);
  if (std::find(candidates.begin(), candidates.end(), source) != candidates.end())
    throw ContractViolation("run_selection_round: source listed as candidate");

  EnergyLedger ledger;
  SelectionOutcome out;
  const std::size_t trace_begin = ctx.trace ? ctx.trace->size() : 0;
  auto log = [&](double t, int id, EventKind kind, double e) {
    if (ctx.trace) ctx.trace->push_back({t, id, kind, EnergyLedger::quantize(e)});
  };
  auto spend = [&](int id, Category c, double e, double t, EventKind kind) {
    ledger.charge(id, c, e);
    log(t, id, kind, e);
  };

  const double tau_src = backoff_map(source_metric(src, ctx), ctx.backoff);
  const double deadline = tau_src + ctx.backoff.tau_th_s;

  spend(source, Category::Overhead, ctx.oh.rtr_tx_j, 0.0, EventKind::RtrTx);
  std::vector<Contender> contenders;
  for (int id : candidates) {
    const DeviceSnapshot& c = lookup(snapshots, id);
    if (c.d2d.hop != channel::Hop::DeviceToDevice || c.bs.hop != channel::Hop::ToBaseStation)
      throw ContractViolation("run_selection_round: snapshot hops are inconsistent");
    spend(id, Category::Overhead, ctx.oh.rtr_rx_j, 0.0, EventKind::RtrRx);
    if (c.bs.value_linear < ctx.gamma_th_linear) continue;
    const double tau = backoff_map(contention_metric(c, src, ctx), ctx.backoff);
    if (tau < deadline) contenders.push_back({tau, id});
  }
  // Event order is (time, device id); ties resolve to the lower id.
  std::sort(contenders.begin(), contenders.end(), [](const Contender& a, const Contender& b) {
    return a.tau != b.tau ? a.tau < b.tau : a.id < b.id;
  });

  // A contender stays silent once it has overheard a CTR that began at least
  // one collision window earlier; otherwise it transmits its own.
  const double window = ctx.backoff.collision_window_s;
  std::vector<Contender> senders;
  for (const Contender& c : contenders) {
    const bool heard = std::any_of(senders.begin(), senders.end(), [&](const Contender& s) {
      const bool in_range = ctx.graph == nullptr || ctx.graph->connected(s.id, c.id);
      return in_range && (c.tau - s.tau >= window);
    });
    if (!heard) senders.push_back(c);
  }

  bool collided = false;
  if (senders.size() >= 2) collided = senders[1].tau - senders[0].tau < window;

  for (std::size_t i = 0; i < senders.size(); ++i) {
    const Contender& s = senders[i];
    const bool winner = i == 0 && !collided;
    spend(s.id, Category::Overhead, ctx.oh.ctr_tx_j, s.tau, winner ? EventKind::CtrTx : EventKind::StrayCtr);
    if (!winner) ++out.stray_ctrs;
  }
  if (collided) log(senders[1].tau, source, EventKind::CtrCollision, 0.0);

  auto go_direct = [&](Reason why) {
    log(deadline, source, EventKind::Timeout, 0.0);
    const auto e = energy::direct_energy(src.bs, with_circuit(ctx.uplink, src.circuit_w));
    ledger.charge(source, e);
    log(deadline, source, EventKind::DirectData, e.total());
    out.path = Path::Direct;
    out.reason = why;
    out.latency_s = deadline + energy::transmission_time_s(src.bs, ctx.uplink);
  };

  if (candidates.empty()) {
    go_direct(Reason::NoCandidates);
  } else if (senders.empty()) {
    go_direct(Reason::SourceWinsContention);
  } else if (collided) {
    go_direct(Reason::CtrCollision);
  } else {
    const Contender& w = senders.front();
    const DeviceSnapshot& relay = snapshots[w.id];
    spend(source, Category::Overhead, ctx.oh.ctr_rx_j, w.tau, EventKind::CtrRx);
    const auto first = energy::d2d_energy(relay.d2d, d2d_radio(ctx, src.circuit_w));
    ledger.charge(source, first);
    log(w.tau, source, EventKind::D2dData, first.total());
    const double t_first = energy::transmission_time_s(relay.d2d, d2d_radio(ctx, src.circuit_w));
    const double processing = ctx.oh.csi_j + ctx.oh.dec_j + ctx.oh.enc_j;
    spend(w.id, Category::Overhead, processing, w.tau + t_first, EventKind::RelayProcessing);
    const auto second = energy::direct_energy(relay.bs, with_circuit(ctx.uplink, relay.circuit_w));
    ledger.charge(w.id, second);
    log(w.tau + t_first, w.id, EventKind::RelayData, second.total());
    out.path = Path::Relayed;
    out.relay_id = w.id;
    out.reason = Reason::RelaySelected;
    out.latency_s = w.tau + t_first + energy::transmission_time_s(relay.bs, ctx.uplink);
  }

  out.breakdown = ledger.breakdown(out.path);
  out.charges = ledger.per_device();
  // Events of this round appear in time order; simultaneous ones keep emission order.
  if (ctx.trace)
    std::stable_sort(ctx.trace->begin() + static_cast<std::ptrdiff_t>(trace_begin), ctx.trace->end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time_s < b.time_s; });
  return out;
}

}  // namespace d2dee::protocol
