// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "d2dee/channel.hpp"
#include "d2dee/energy.hpp"
#include "d2dee/errors.hpp"

namespace d2dee::sim {

using energy::EnergyLedger;

namespace {

// Stream tags; device streams use the device id (>= 0) as tag.
constexpr std::uint64_t kTagNetwork = 1ULL << 40;
constexpr std::uint64_t kTagSource = kTagNetwork + 1;
constexpr std::uint64_t kTagReplication = kTagNetwork + 2;
constexpr std::uint64_t kTagCalibration = kTagNetwork + 3;
constexpr std::uint64_t kTagMonteCarlo = kTagNetwork + 4;

constexpr double kJoulesPerMwh = 3.6;
constexpr double kMinDistanceM = 1.0;

// Runs body(i) for i in [0, n) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
template <class Body>
void parallel_for(int n, int threads, Body body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
};

McEstimate finish(const std::vector<Moments>& chunks) {
  Moments m;
  for (const Moments& c : chunks) {
    m.sum += c.sum;
    m.sum_sq += c.sum_sq;
    m.count += c.count;
  }
  McEstimate out;
  out.trials = m.count;
  out.mean = m.sum / static_cast<double>(m.count);
  const double var = std::max(0.0, (m.sum_sq - m.count * out.mean * out.mean) / (m.count - 1.0));
  out.stderr_ = m.count > 1 ? std::sqrt(var / static_cast<double>(m.count)) : 0.0;
  return out;
}

// Fixed chunking keeps every estimate independent of the worker count.
template <class Trial>
McEstimate run_trials(long trials, std::uint64_t seed, std::uint64_t tag, int threads, Trial trial) {
  if (trials < 2) throw ContractViolation("Monte Carlo needs at least 2 trials");
  constexpr long kChunk = 2048;
  const int n_chunks = static_cast<int>((trials + kChunk - 1) / kChunk);
  std::vector<Moments> chunks(n_chunks);
  parallel_for(n_chunks, resolve_threads(threads), [&](int c) {
    RandomStream rng(seed, tag, static_cast<std::uint64_t>(c));
    const long end = std::min(trials, (c + 1) * kChunk);
    for (long t = c * kChunk; t < end; ++t) chunks[c].add(trial(rng));
  });
  return finish(chunks);
}

// Rate in dB-equivalent units: 10 log10(1 + gamma), so energy = eta / rate.
double physical_rate_db(double snr_db) {
  return 10.0 * std::log10(1.0 + std::pow(10.0, snr_db / 10.0));
}

double uniform_or_fixed(RandomStream& rng, double lo, double hi) {
  return lo == hi ? lo : rng.uniform(lo, hi);
}

double radius(const protocol::Point& p) { return std::hypot(p.x, p.y); }

protocol::Point area_uniform(RandomStream& rng, double r_min, double r_max) {
  const double r = std::sqrt(rng.uniform(r_min * r_min, r_max * r_max));
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("D2DEE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Layout layout_from_config(const ScenarioConfig& cfg) {
  if (cfg.layout == "ring") return RingLayout{cfg.ring_radius_m};
  if (cfg.layout == "cluster")
    return ClusterLayout{cfg.annulus_r_min_m, cfg.annulus_r_max_m, cfg.cluster_radius_m};
  if (cfg.layout == "annulus") return AnnulusLayout{cfg.annulus_r_min_m, cfg.annulus_r_max_m};
  throw ConfigError("layout: unknown layout '" + cfg.layout + "'", "layout");
}

std::string layout_name(const Layout& layout) {
  struct V {
    std::string operator()(const RingLayout&) const { return "ring"; }
    std::string operator()(const AnnulusLayout&) const { return "annulus"; }
    std::string operator()(const ClusterLayout&) const { return "cluster"; }
  };
  return std::visit(V{}, layout);
}

std::vector<Device> generate_network(int n, const Layout& layout, double pckt_min_w,
                                     double pckt_max_w, double battery_j, RandomStream& rng) {
  if (n < 1) throw ContractViolation("generate_network: n must be >= 1");
  if (!(pckt_min_w >= 0 && pckt_min_w <= pckt_max_w))
    throw ConfigError("pckt_min_w: need 0 <= pckt_min_w <= pckt_max_w", "pckt_min_w");

  std::vector<Device> devices(n);
  protocol::Point centre;
  if (const auto* c = std::get_if<ClusterLayout>(&layout)) {
    if (!(c->radius_m > 0 && c->r_max_m - c->r_min_m > 2 * c->radius_m))
      throw ConfigError("cluster_radius_m: cluster must fit inside the annulus", "cluster_radius_m");
    centre = area_uniform(rng, c->r_min_m + c->radius_m, c->r_max_m - c->radius_m);
  }
  for (int i = 0; i < n; ++i) {
    Device& d = devices[i];
    d.id = i;
    if (const auto* ring = std::get_if<RingLayout>(&layout)) {
      if (!(ring->radius_m > 0)) throw ConfigError("ring_radius_m: must be > 0", "ring_radius_m");
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      d.position = {ring->radius_m * std::cos(phi), ring->radius_m * std::sin(phi)};
    } else if (const auto* a = std::get_if<AnnulusLayout>(&layout)) {
      if (!(a->r_min_m >= 0 && a->r_min_m < a->r_max_m))
        throw ConfigError("annulus_r_min_m: need 0 <= r_min < r_max", "annulus_r_min_m");
      d.position = area_uniform(rng, a->r_min_m, a->r_max_m);
    } else {
      const auto& c = std::get<ClusterLayout>(layout);
      const auto off = area_uniform(rng, 0.0, c.radius_m);
      d.position = {centre.x + off.x, centre.y + off.y};
    }
    d.circuit_w = uniform_or_fixed(rng, pckt_min_w, pckt_max_w);
    d.battery_j = battery_j;
  }
  return devices;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::DsrSingleHop: return "dsr_single_hop";
    case Scheme::DsrDualHop: return "dsr_dual_hop";
    case Scheme::OrSingleHop: return "or_single_hop";
    case Scheme::OrDualHop: return "or_dual_hop";
    case Scheme::Direct: return "direct";
  }
  return "?";
}

std::vector<Scheme> all_schemes() {
  return {Scheme::DsrSingleHop, Scheme::DsrDualHop, Scheme::OrSingleHop, Scheme::OrDualHop,
          Scheme::Direct};
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : all_schemes())
    if (name == scheme_name(s)) return s;
  throw ConfigError("unknown scheme '" + name + "'", "schemes");
}

LinkBudget LinkBudget::from_config(const ScenarioConfig& cfg) {
  LinkBudget b;
  b.tx_power_w = channel::dbm_to_watts(cfg.tx_power_dbm);
  b.d2d_tx_power_w = channel::dbm_to_watts(cfg.d2d_tx_power_dbm);
  const double thermal_dbm = cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz);
  b.bs_noise_w = channel::dbm_to_watts(thermal_dbm + cfg.interference_db);
  b.d2d_noise_w = channel::dbm_to_watts(thermal_dbm + cfg.d2d_interference_db);
  b.gamma_th_linear = channel::db_to_linear(cfg.gamma_th_db);
  return b;
}

namespace {

protocol::OverheadEnergies overheads(const ScenarioConfig& cfg) {
  if (cfg.zero_overhead) return protocol::OverheadEnergies::zero();
  return {cfg.rtr_tx_uj * 1e-6, cfg.rtr_rx_uj * 1e-6, cfg.ctr_tx_uj * 1e-6, cfg.ctr_rx_uj * 1e-6,
          cfg.csi_uj * 1e-6,    cfg.dec_uj * 1e-6,    cfg.enc_uj * 1e-6};
}

channel::LognormalLinkParams bs_link(const ScenarioConfig& cfg, const LinkBudget& b,
                                     const protocol::Point& p) {
  channel::LognormalLinkParams l;
  l.distance_m = std::max(kMinDistanceM, radius(p));
  l.pathloss_alpha = cfg.pathloss_alpha;
  l.pathloss_norm_g_db = cfg.pathloss_norm_g_db;
  l.tx_power_w = b.tx_power_w;
  l.noise_w = b.bs_noise_w;
  l.shadow_sigma_db = cfg.sigma_db;
  return l;
}

energy::RadioParams uplink_radio(const ScenarioConfig& cfg, const LinkBudget& b, double circuit_w) {
  return {b.tx_power_w, circuit_w, cfg.payload_bits, cfg.bandwidth_hz};
}

// Direct transmission of one payload; with power control the device picks
// the energy-optimal power for its current channel gain.
energy::HopEnergy uplink_hop(const ScenarioConfig& cfg, const LinkBudget& b,
                             const channel::SnrSample& snr, double circuit_w) {
  energy::RadioParams radio = uplink_radio(cfg, b, circuit_w);
  if (!cfg.power_control) return energy::direct_energy(snr, radio);
  const double gain = snr.value_linear / b.tx_power_w;
  const double p = energy::optimal_power(gain, circuit_w, {cfg.power_min_w, cfg.power_max_w});
  radio.tx_power_w = p;
  return energy::direct_energy(
      channel::SnrSample::from_linear(gain * p, channel::Hop::ToBaseStation), radio);
}

struct SlotResult {
  int source = 0;
  int relay = -1;
  std::int64_t energy_q = 0;
  bool died = false;
};

struct CampaignSetup {
  const ScenarioConfig& cfg;
  Scheme scheme;
  int n;
  LinkBudget budget;
  protocol::OverheadEnergies oh;
  double energy_scale_j;
};

class Replication {
 public:
  Replication(const CampaignSetup& setup, int replication)
      : s_(setup), master_(RandomStream(setup.cfg.seed, kTagReplication,
                                        static_cast<std::uint64_t>(replication)).key()) {
    const ScenarioConfig& cfg = s_.cfg;
    RandomStream net(master_, kTagNetwork);
    devices_ = generate_network(s_.n, layout_from_config(cfg), cfg.pckt_min_w, cfg.pckt_max_w,
                                cfg.battery_mwh * kJoulesPerMwh, net);
    positions_.reserve(devices_.size());
    for (const Device& d : devices_) {
      positions_.push_back(d.position);
      bs_links_.push_back(bs_link(cfg, s_.budget, d.position));
    }
    // Positions are fixed within a replication, so neighbourhoods are too.
    neighbours_.resize(devices_.size());
    for (int i = 0; i < s_.n; ++i)
      for (int j = 0; j < s_.n; ++j)
        if (i != j && (cfg.whole_network ||
                       protocol::distance(positions_[i], positions_[j]) <= cfg.d2d_range_m))
          neighbours_[i].push_back(j);
    snapshots_.resize(devices_.size());
  }

  SlotResult step(long long slot, std::vector<protocol::TraceEvent>* trace,
                  protocol::SelectionOutcome* outcome_out = nullptr) {
    const ScenarioConfig& cfg = s_.cfg;
    const auto slot_key = static_cast<std::uint64_t>(slot);
    SlotResult r;
    RandomStream pick(master_, kTagSource, slot_key);
    r.source = std::min(s_.n - 1, static_cast<int>(pick.uniform() * s_.n));
    const Device& src = devices_[r.source];

    protocol::DeviceSnapshot& ss = snapshots_[r.source];
    {
      RandomStream rng(master_, static_cast<std::uint64_t>(r.source), slot_key);
      ss = {r.source, {}, channel::sample_bs_snr(bs_links_[r.source], rng), src.circuit_w};
    }

    std::vector<std::pair<int, double>> charges;
    if (s_.scheme == Scheme::Direct) {
      const auto e = uplink_hop(cfg, s_.budget, ss.bs, src.circuit_w);
      EnergyLedger ledger;
      ledger.charge(r.source, e);
      charges = ledger.per_device();
      if (trace) trace->push_back({0.0, r.source, protocol::EventKind::DirectData,
                                   EnergyLedger::quantize(e.total())});
    } else {
      const std::vector<int>& cands = neighbours_[r.source];
      for (int id : cands) {
        RandomStream rng(master_, static_cast<std::uint64_t>(id), slot_key);
        protocol::DeviceSnapshot& c = snapshots_[id];
        c.id = id;
        c.circuit_w = devices_[id].circuit_w;
        c.bs = channel::sample_bs_snr(bs_links_[id], rng);
        channel::RayleighLinkParams d2d;
        d2d.distance_m = std::max(kMinDistanceM, protocol::distance(src.position, devices_[id].position));
        d2d.pathloss_alpha = cfg.d2d_pathloss_alpha;
        d2d.tx_power_w = s_.budget.d2d_tx_power_w;
        d2d.noise_w = s_.budget.d2d_noise_w;
        c.d2d = channel::sample_d2d_snr(d2d, rng);
      }
      protocol::RoundContext ctx;
      ctx.uplink = uplink_radio(cfg, s_.budget, 0.0);
      ctx.d2d_tx_power_w = s_.budget.d2d_tx_power_w;
      ctx.gamma_th_linear = s_.budget.gamma_th_linear;
      const bool dual = s_.scheme == Scheme::DsrDualHop || s_.scheme == Scheme::OrDualHop;
      ctx.mode = dual ? energy::SelectionMode::DualHop : energy::SelectionMode::SingleHop;
      const bool dsr = s_.scheme == Scheme::DsrSingleHop || s_.scheme == Scheme::DsrDualHop;
      ctx.metric = dsr ? protocol::MetricKind::Energy : protocol::MetricKind::ChannelOnly;
      ctx.oh = s_.oh;
      ctx.backoff = {cfg.tau_max_s, s_.energy_scale_j, cfg.tau_th_s, cfg.collision_window_s};
      protocol::ContentionGraph graph;
      if (!cfg.whole_network && cands.size() > 1) {
        graph = protocol::hidden_node_filter(cands, positions_, cfg.d2d_range_m);
        ctx.graph = &graph;
      }
      ctx.trace = trace;
      auto outcome = protocol::run_selection_round(r.source, cands, snapshots_, ctx);
      if (outcome.relay_id) r.relay = *outcome.relay_id;
      charges = outcome.charges;
      if (outcome_out) *outcome_out = std::move(outcome);
    }

    for (const auto& [id, joules] : charges) {
      const std::int64_t q = EnergyLedger::to_quanta(joules);
      r.energy_q += q;
      if (cfg.battery_mode) {
        Device& d = devices_[id];
        d.battery_j -= EnergyLedger::from_quanta(q);
        if (!d.alive()) r.died = true;
      }
    }
    return r;
  }

 private:
  const CampaignSetup& s_;
  std::uint64_t master_;
  std::vector<Device> devices_;
  std::vector<protocol::Point> positions_;
  std::vector<channel::LognormalLinkParams> bs_links_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<protocol::DeviceSnapshot> snapshots_;
};

CampaignSetup make_setup(const ScenarioConfig& cfg, Scheme scheme, int n) {
  cfg.validate();
  if (n < 1) throw ContractViolation("campaign: n_devices must be >= 1");
  const double scale = cfg.energy_scale_j > 0 ? cfg.energy_scale_j : calibrate_energy_scale(cfg);
  return {cfg, scheme, n, LinkBudget::from_config(cfg), overheads(cfg), scale};
}

struct ReplicationTotals {
  std::int64_t energy_q = 0;
  long long slots = 0;
  long long relayed = 0;
};

ReplicationTotals run_replication(const CampaignSetup& setup, int rep) {
  Replication sim(setup, rep);
  ReplicationTotals t;
  const long long limit =
      setup.cfg.battery_mode ? setup.cfg.max_depletion_slots : setup.cfg.slots_per_replication;
  for (long long slot = 0; slot < limit; ++slot) {
    const SlotResult r = sim.step(slot, nullptr);
    t.energy_q += r.energy_q;
    ++t.slots;
    if (r.relay >= 0) ++t.relayed;
    if (r.died) break;
  }
  return t;
}

double mean_stderr(const std::vector<double>& v, double* mean_out) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean_out) *mean_out = mean;
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1.0) / static_cast<double>(v.size()));
}

}  // namespace

bounds::ShadowScenario shadow_scenario(const ScenarioConfig& cfg, int n_devices) {
  cfg.validate();
  const LinkBudget b = LinkBudget::from_config(cfg);
  const double mean_db = channel::mean_snr_db(bs_link(cfg, b, {cfg.ring_radius_m, 0.0}));
  return bounds::ShadowScenario::from_radio(mean_db, cfg.sigma_db, cfg.gamma_th_db, b.tx_power_w,
                                            cfg.payload_bits, cfg.bandwidth_hz, cfg.pckt_min_w,
                                            cfg.pckt_max_w, n_devices);
}

double calibrate_energy_scale(const ScenarioConfig& cfg) {
  constexpr int kSamples = 4096;
  const LinkBudget b = LinkBudget::from_config(cfg);
  RandomStream rng(cfg.seed, kTagCalibration);
  const auto devices = generate_network(kSamples, layout_from_config(cfg), cfg.pckt_min_w,
                                        cfg.pckt_max_w, 1.0, rng);
  std::vector<double> e;
  e.reserve(kSamples);
  for (const Device& d : devices) {
    const auto snr = channel::sample_bs_snr(bs_link(cfg, b, d.position), rng);
    e.push_back(energy::direct_energy(snr, uplink_radio(cfg, b, d.circuit_w)).total());
  }
  std::nth_element(e.begin(), e.begin() + kSamples / 2, e.end());
  return e[kSamples / 2];
}

CampaignResult run_campaign(const ScenarioConfig& cfg, Scheme scheme, int n_devices) {
  const CampaignSetup setup = make_setup(cfg, scheme, n_devices);
  const int reps = cfg.replications;
  std::vector<ReplicationTotals> totals(reps);
  parallel_for(reps, resolve_threads(cfg.threads),
               [&](int rep) { totals[rep] = run_replication(setup, rep); });

  CampaignResult out;
  out.scheme = scheme;
  out.n_devices = n_devices;
  out.layout = cfg.layout;
  out.replications = reps;
  std::int64_t energy_q = 0;
  std::vector<double> per_energy, per_ee, per_slots, per_relay;
  for (const auto& t : totals) {
    energy_q += t.energy_q;
    out.slots += t.slots;
    const double e = EnergyLedger::from_quanta(t.energy_q);
    const double bits = cfg.payload_bits * static_cast<double>(t.slots);
    per_energy.push_back(e / static_cast<double>(t.slots));
    per_ee.push_back(bits / e);
    per_slots.push_back(static_cast<double>(t.slots));
    per_relay.push_back(static_cast<double>(t.relayed) / static_cast<double>(t.slots));
    out.per_replication.push_back({e, t.slots, t.relayed});
  }
  // Every slot delivers its payload, through a relay or directly.
  out.total_energy_j = EnergyLedger::from_quanta(energy_q);
  out.delivered_bits = cfg.payload_bits * static_cast<double>(out.slots);
  out.mean_energy_j = out.total_energy_j / static_cast<double>(out.slots);
  out.energy_efficiency_bpj = out.delivered_bits / out.total_energy_j;
  out.mean_energy_stderr = mean_stderr(per_energy, nullptr);
  out.energy_efficiency_stderr = mean_stderr(per_ee, nullptr);
  out.relay_fraction_stderr = mean_stderr(per_relay, &out.relay_fraction);
  if (cfg.battery_mode) {
    out.n_tx_until_depletion_stderr = mean_stderr(per_slots, &out.n_tx_until_depletion);
  } else {
    out.n_tx_until_depletion = std::numeric_limits<double>::quiet_NaN();
    out.n_tx_until_depletion_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<SlotRecord> replay_slots(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                                     int replication, int slots) {
  ScenarioConfig c = cfg;
  c.battery_mode = false;
  const CampaignSetup setup = make_setup(c, scheme, n_devices);
  Replication sim(setup, replication);
  std::vector<SlotRecord> out;
  out.reserve(slots);
  for (int s = 0; s < slots; ++s) {
    const SlotResult r = sim.step(s, nullptr);
    out.push_back({r.source, r.relay, EnergyLedger::from_quanta(r.energy_q)});
  }
  return out;
}

long long depletion_experiment(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                               int replication) {
  ScenarioConfig c = cfg;
  c.battery_mode = true;
  const CampaignSetup setup = make_setup(c, scheme, n_devices);
  return run_replication(setup, replication).slots;
}

std::vector<TracedSlot> protocol_trace(const ScenarioConfig& cfg, Scheme scheme, int n_devices,
                                       int slots) {
  ScenarioConfig c = cfg;
  c.battery_mode = false;
  const CampaignSetup setup = make_setup(c, scheme, n_devices);
  Replication sim(setup, 0);
  std::vector<TracedSlot> out;
  for (int s = 0; s < slots; ++s) {
    TracedSlot t;
    t.slot = s;
    const SlotResult r = sim.step(s, &t.events, &t.outcome);
    t.source = r.source;
    if (scheme == Scheme::Direct) {
      t.outcome.path = energy::Path::Direct;
      t.outcome.charges = {{r.source, EnergyLedger::from_quanta(r.energy_q)}};
    }
    out.push_back(std::move(t));
  }
  return out;
}

McEstimate mc_direct_energy(const bounds::ShadowScenario& s, long trials, std::uint64_t seed,
                            int threads) {
  s.validate();
  return run_trials(trials, seed, kTagMonteCarlo, threads, [&](RandomStream& rng) {
    double x = s.mean_snr_db + s.sigma_db * rng.normal();
    while (x < s.gamma_th_db) x = s.mean_snr_db + s.sigma_db * rng.normal();
    const double pckt = uniform_or_fixed(rng, s.pckt_min_w, s.pckt_max_w);
    return (s.eta1 + s.eta2 * pckt) / physical_rate_db(x);
  });
}

McEstimate mc_relay_energy(const bounds::ShadowScenario& s, long trials, std::uint64_t seed,
                           int threads) {
  s.validate();
  const int n = s.n_devices;
  if (s.pckt_min_w == s.pckt_max_w) {
    // Equal circuit powers: the best relay is the one with the largest SNR,
    // and the maximum of n normals is sampled exactly by inversion.
    const boost::math::normal_distribution<double> unit;
    const double coef = s.eta1 + s.eta2 * s.pckt_min_w;
    return run_trials(trials, seed, kTagMonteCarlo + 1, threads, [&](RandomStream& rng) {
      for (;;) {
        const double u = rng.uniform();
        if (u == 0.0) continue;
        const double tail = -std::expm1(std::log(u) / n);  // P(Z > z_max)
        if (tail >= 1.0) continue;
        const double x = s.mean_snr_db +
                         s.sigma_db * boost::math::quantile(boost::math::complement(unit, tail));
        if (x >= s.gamma_th_db) return coef / physical_rate_db(x);
      }
    });
  }
  const double floor_coef = s.eta1 + s.eta2 * s.pckt_min_w;
  return run_trials(trials, seed, kTagMonteCarlo + 2, threads, [&](RandomStream& rng) {
    double best = std::numeric_limits<double>::infinity();
    while (!std::isfinite(best)) {
      // A device whose SNR is at most x_cut loses even at the lowest circuit power;
      // a trial where every device is below the threshold is drawn again.
      double x_cut = s.gamma_th_db;
      for (int i = 0; i < n; ++i) {
        const double x = s.mean_snr_db + s.sigma_db * rng.normal();
        if (x < x_cut) continue;
        const double e = (s.eta1 + s.eta2 * rng.uniform(s.pckt_min_w, s.pckt_max_w)) / physical_rate_db(x);
        if (e < best) {
          best = e;
          const double rate_needed = floor_coef / best;
          x_cut = std::max(s.gamma_th_db,
                           10.0 * std::log10(std::max(0.0, std::expm1(rate_needed * std::log(10.0) / 10.0))));
        }
      }
    }
    return best;
  });
}

McEstimate mc_d2d_energy(const bounds::D2dScenario& s, long trials, std::uint64_t seed,
                         int threads) {
  s.validate();
  const double eta1 = s.eta1(), eta2 = eta1 / s.tx_power_w;
  return run_trials(trials, seed, kTagMonteCarlo + 3, threads, [&](RandomStream& rng) {
    const double snr = s.mean_snr * rng.exponential();
    const double pckt = uniform_or_fixed(rng, s.pckt_min_w, s.pckt_max_w);
    return snr < s.gamma_th ? 0.0 : (eta1 + eta2 * pckt) / std::log1p(snr);
  });
}

McEstimate mc_min_uniform(double a, double b, int n, long trials, std::uint64_t seed) {
  if (!(a <= b) || n < 1) throw DomainError("mc_min_uniform: need a <= b and n >= 1");
  return run_trials(trials, seed, kTagMonteCarlo + 4, 1, [&](RandomStream& rng) {
    double m = b;
    for (int i = 0; i < n; ++i) m = std::min(m, rng.uniform(a, b));
    return m;
  });
}

}  // namespace d2dee::sim
