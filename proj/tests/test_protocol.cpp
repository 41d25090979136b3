#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "d2dee/errors.hpp"
#include "d2dee/protocol.hpp"
#include "doctest.h"

using namespace d2dee;
using namespace d2dee::protocol;
using channel::Hop;
using channel::SnrSample;

namespace {

DeviceSnapshot device(int id, double bs_db, double d2d_db, double circuit_w = 0.1) {
  DeviceSnapshot d;
  d.id = id;
  d.bs = SnrSample::from_db(bs_db, Hop::ToBaseStation);
  d.d2d = SnrSample::from_db(d2d_db, Hop::DeviceToDevice);
  d.circuit_w = circuit_w;
  return d;
}

RoundContext context(double window_s) {
  RoundContext ctx;
  ctx.backoff.collision_window_s = window_s;
  ctx.backoff.energy_scale_j = 0.005;
  ctx.gamma_th_linear = 2.0;
  return ctx;
}

std::vector<int> ids(int from, int to) {
  std::vector<int> v;
  for (int i = from; i < to; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("backoff map is monotone and saturates at tau_max") {
  BackoffConfig cfg;
  CHECK(backoff_map(0.0, cfg) == 0.0);
  double prev = -1;
  for (double e = 0; e < 0.1; e += 1e-3) {
    const double t = backoff_map(e, cfg);
    CHECK(t > prev);
    CHECK(t < cfg.tau_max_s);
    prev = t;
  }
  CHECK(backoff_map(1.0, cfg) == doctest::Approx(cfg.tau_max_s * (1 - std::exp(-1.0))));
  CHECK_THROWS_AS(backoff_map(-1.0, cfg), DomainError);
}

TEST_CASE("with a zero collision window the winner is the metric argmin") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> bs(15, 8), d2d(30, 10);
  std::uniform_real_distribution<double> pc(0.05, 0.15);
  for (auto mode : {energy::SelectionMode::SingleHop, energy::SelectionMode::DualHop}) {
    for (auto metric : {MetricKind::Energy, MetricKind::ChannelOnly}) {
      auto ctx = context(0.0);
      ctx.mode = mode;
      ctx.metric = metric;
      for (int trial = 0; trial < 300; ++trial) {
        std::vector<DeviceSnapshot> snaps;
        for (int i = 0; i < 8; ++i) snaps.push_back(device(i, bs(gen), d2d(gen), pc(gen)));
        const auto cands = ids(1, 8);
        const auto out = run_selection_round(0, cands, snaps, ctx);

        const double deadline =
            backoff_map(source_metric(snaps[0], ctx), ctx.backoff) + ctx.backoff.tau_th_s;
        int best = -1;
        double best_tau = std::numeric_limits<double>::infinity();
        for (int id : cands) {
          if (snaps[id].bs.value_linear < ctx.gamma_th_linear) continue;
          const double tau = backoff_map(contention_metric(snaps[id], snaps[0], ctx), ctx.backoff);
          if (tau < deadline && tau < best_tau) best = id, best_tau = tau;
        }
        if (best < 0) {
          CHECK(out.path == energy::Path::Direct);
          CHECK(out.reason == Reason::SourceWinsContention);
        } else {
          REQUIRE(out.relay_id.has_value());
          CHECK(*out.relay_id == best);
          CHECK(out.stray_ctrs == 0);
        }
      }
    }
  }
}

TEST_CASE("no candidates means direct transmission") {
  std::vector<DeviceSnapshot> snaps{device(0, 10, 10)};
  const auto out = run_selection_round(0, {}, snaps, context(10e-6));
  CHECK(out.reason == Reason::NoCandidates);
  CHECK(out.path == energy::Path::Direct);
  CHECK_FALSE(out.relay_id.has_value());
}

TEST_CASE("near-simultaneous CTRs collide and the source goes direct") {
  // Two identical candidates back off at the same instant.
  std::vector<DeviceSnapshot> snaps{device(0, 5, 0), device(1, 25, 40), device(2, 25, 40)};
  std::vector<TraceEvent> trace;
  auto ctx = context(10e-6);
  ctx.trace = &trace;
  const auto out = run_selection_round(0, {1, 2}, snaps, ctx);
  CHECK(out.reason == Reason::CtrCollision);
  CHECK(out.path == energy::Path::Direct);
  CHECK(out.stray_ctrs == 2);
  CHECK(std::any_of(trace.begin(), trace.end(),
                    [](const TraceEvent& e) { return e.kind == EventKind::CtrCollision; }));
}

TEST_CASE("hidden candidates send stray CTRs without blocking the winner") {
  // Devices 1 and 2 are out of each other's range.
  std::vector<Point> pos{{0, 0}, {-40, 0}, {40, 0}};
  const auto graph = hidden_node_filter({1, 2}, pos, 50.0);
  CHECK_FALSE(graph.connected(1, 2));
  CHECK_FALSE(graph.is_fully_connected());
  std::vector<DeviceSnapshot> snaps{device(0, 5, 0), device(1, 30, 40), device(2, 22, 40)};
  auto ctx = context(10e-6);
  ctx.graph = &graph;
  const auto out = run_selection_round(0, {1, 2}, snaps, ctx);
  REQUIRE(out.relay_id.has_value());
  CHECK(*out.relay_id == 1);
  CHECK(out.stray_ctrs == 1);

  // Once they hear each other the later CTR is suppressed.
  ctx.graph = nullptr;
  const auto heard = run_selection_round(0, {1, 2}, snaps, ctx);
  CHECK(*heard.relay_id == 1);
  CHECK(heard.stray_ctrs == 0);
}

TEST_CASE("candidates below the threshold stay silent") {
  std::vector<DeviceSnapshot> snaps{device(0, 5, 0), device(1, 1.0, 40)};
  const auto out = run_selection_round(0, {1}, snaps, context(10e-6));
  CHECK(out.reason == Reason::SourceWinsContention);
}

TEST_CASE("charges and trace account for the whole breakdown") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> bs(12, 8), d2d(30, 10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DeviceSnapshot> snaps;
    for (int i = 0; i < 6; ++i) snaps.push_back(device(i, bs(gen), d2d(gen)));
    std::vector<TraceEvent> trace;
    auto ctx = context(10e-6);
    ctx.mode = trial % 2 ? energy::SelectionMode::DualHop : energy::SelectionMode::SingleHop;
    ctx.trace = &trace;
    const auto out = run_selection_round(0, ids(1, 6), snaps, ctx);
    double per_device = 0.0, traced = 0.0;
    for (const auto& [id, j] : out.charges) per_device += j;
    for (const auto& e : trace) traced += e.energy_j;
    CHECK(per_device == doctest::Approx(out.breakdown.total_j).epsilon(1e-12));
    CHECK(traced == doctest::Approx(out.breakdown.total_j).epsilon(1e-9));
    CHECK(out.breakdown.overhead_j >= ctx.oh.rtr_tx_j + 5 * ctx.oh.rtr_rx_j - 8 * energy::EnergyLedger::kQuantumJ);
    CHECK(std::is_sorted(out.charges.begin(), out.charges.end()));
    CHECK(out.latency_s > 0);
  }
}

TEST_CASE("round contract violations") {
  std::vector<DeviceSnapshot> snaps{device(0, 5, 0), device(1, 20, 20)};
  CHECK_THROWS_AS(run_selection_round(0, {0, 1}, snaps, context(0)), ContractViolation);
  CHECK_THROWS_AS(run_selection_round(0, {3}, snaps, context(0)), ContractViolation);
  CHECK_THROWS_AS(hidden_node_filter({4}, {{0, 0}}, 50.0), ContractViolation);
}
