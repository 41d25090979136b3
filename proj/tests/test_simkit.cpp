#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "d2dee/errors.hpp"
#include "d2dee/simkit.hpp"
#include "doctest.h"

using namespace d2dee;
using namespace d2dee::sim;

namespace {

double radius(const Device& d) { return std::hypot(d.position.x, d.position.y); }

ScenarioConfig small_campaign() {
  ScenarioConfig cfg;
  cfg.replications = 8;
  cfg.slots_per_replication = 200;
  return cfg;
}

}  // namespace

TEST_CASE("ring layout puts every device at the radius") {
  RandomStream rng(1);
  for (const auto& d : generate_network(200, RingLayout{300.0}, 0.1, 0.2, 1.0, rng)) {
    CHECK(radius(d) == doctest::Approx(300.0).epsilon(1e-12));
    CHECK(d.circuit_w >= 0.1);
    CHECK(d.circuit_w <= 0.2);
    CHECK(d.alive());
  }
}

TEST_CASE("annulus layout is area-uniform") {
  // r^2 is uniform on [r_min^2, r_max^2].
  RandomStream rng(2);
  const auto devices = generate_network(20000, AnnulusLayout{50.0, 500.0}, 0.1, 0.1, 1.0, rng);
  std::vector<double> u;
  for (const auto& d : devices) {
    const double r = radius(d);
    REQUIRE(r >= 50.0);
    REQUIRE(r <= 500.0);
    u.push_back((r * r - 2500.0) / (250000.0 - 2500.0));
    CHECK(d.circuit_w == 0.1);
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  const double n = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ks = std::max({ks, u[i] - i / n, (i + 1) / n - u[i]});
  CHECK(ks < 1.628 / std::sqrt(n));
}

TEST_CASE("cluster layout stays inside its disk and the annulus") {
  RandomStream rng(3);
  const auto devices = generate_network(500, ClusterLayout{50.0, 500.0, 25.0}, 0.1, 0.2, 1.0, rng);
  double cx = 0, cy = 0;
  for (const auto& d : devices) cx += d.position.x, cy += d.position.y;
  cx /= devices.size();
  cy /= devices.size();
  for (const auto& d : devices) {
    CHECK(std::hypot(d.position.x - cx, d.position.y - cy) <= 50.0);
    CHECK(radius(d) >= 50.0);
    CHECK(radius(d) <= 500.0);
  }
}

TEST_CASE("scheme names round-trip") {
  for (Scheme s : all_schemes()) CHECK(scheme_from_name(scheme_name(s)) == s);
  CHECK_THROWS_AS(scheme_from_name("flooding"), ConfigError);
}

TEST_CASE("campaigns are identical for any worker count") {
  auto cfg = small_campaign();
  for (Scheme s : {Scheme::DsrDualHop, Scheme::OrSingleHop}) {
    cfg.threads = 1;
    const auto a = run_campaign(cfg, s, 30);
    cfg.threads = 3;
    const auto b = run_campaign(cfg, s, 30);
    CHECK(a.total_energy_j == b.total_energy_j);
    CHECK(a.relay_fraction == b.relay_fraction);
    CHECK(a.mean_energy_stderr == b.mean_energy_stderr);
  }
}

TEST_CASE("campaign totals satisfy the efficiency identity") {
  const auto cfg = small_campaign();
  for (Scheme s : all_schemes()) {
    const auto r = run_campaign(cfg, s, 50);
    CHECK(r.slots == static_cast<long long>(cfg.replications) * cfg.slots_per_replication);
    CHECK(r.delivered_bits == cfg.payload_bits * r.slots);
    CHECK(r.energy_efficiency_bpj == doctest::Approx(r.delivered_bits / r.total_energy_j).epsilon(1e-14));
    CHECK(r.mean_energy_j * r.energy_efficiency_bpj == doctest::Approx(cfg.payload_bits).epsilon(1e-12));
    CHECK(std::isnan(r.n_tx_until_depletion));
    CHECK(r.relay_fraction >= 0.0);
    CHECK(r.relay_fraction <= 1.0);
  }
}

TEST_CASE("direct scheme and lone devices never relay") {
  const auto cfg = small_campaign();
  CHECK(run_campaign(cfg, Scheme::Direct, 50).relay_fraction == 0.0);
  for (Scheme s : all_schemes()) {
    for (const auto& rec : replay_slots(cfg, s, 1, 0, 50)) {
      CHECK(rec.source == 0);
      CHECK(rec.relay == -1);
    }
  }
}

TEST_CASE("relayed slots name a relay other than the source") {
  auto cfg = small_campaign();
  cfg.whole_network = true;
  int relayed = 0;
  for (const auto& rec : replay_slots(cfg, Scheme::DsrSingleHop, 40, 0, 300)) {
    if (rec.relay >= 0) {
      ++relayed;
      CHECK(rec.relay != rec.source);
    }
    CHECK(rec.energy_j > 0);
  }
  CHECK(relayed > 0);
}

TEST_CASE("direct scheme energy matches an independent quadrature") {
  // Ring with fixed distance: E = (P + E[Pckt]) L / B * E[1 / log2(1 + 10^(X/10))].
  ScenarioConfig cfg;
  cfg.layout = "ring";
  cfg.zero_overhead = true;
  cfg.replications = 20;
  cfg.slots_per_replication = 2000;
  const auto r = run_campaign(cfg, Scheme::Direct, 20);
  const auto s = shadow_scenario(cfg, 1);
  const double mu = s.mean_snr_db, sigma = s.sigma_db;
  double integral = 0.0;
  const int steps = 20000;
  const double lo = mu - 10 * sigma, hi = mu + 10 * sigma, h = (hi - lo) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    const double pdf = std::exp(-0.5 * std::pow((x - mu) / sigma, 2)) / (sigma * std::sqrt(2 * std::numbers::pi));
    integral += w * h * pdf / std::log2(1.0 + std::pow(10.0, x / 10.0));
  }
  const double p = std::pow(10.0, (cfg.tx_power_dbm - 30) / 10.0);
  const double expected = (p + 0.5 * (cfg.pckt_min_w + cfg.pckt_max_w)) * cfg.payload_bits / cfg.bandwidth_hz * integral;
  CHECK(std::fabs(r.mean_energy_j - expected) < 4 * r.mean_energy_stderr);
}

TEST_CASE("removing control overhead never shortens battery life") {
  ScenarioConfig cfg;
  cfg.battery_mwh = 0.005;
  for (int rep = 0; rep < 3; ++rep) {
    const long long with = depletion_experiment(cfg, Scheme::DsrSingleHop, 30, rep);
    cfg.zero_overhead = true;
    const long long without = depletion_experiment(cfg, Scheme::DsrSingleHop, 30, rep);
    cfg.zero_overhead = false;
    CHECK(without >= with);
    CHECK(with > 0);
  }
}

TEST_CASE("battery mode reports transmissions until depletion") {
  ScenarioConfig cfg;
  cfg.battery_mode = true;
  cfg.battery_mwh = 0.005;
  cfg.replications = 4;
  const auto r = run_campaign(cfg, Scheme::Direct, 15);
  CHECK(r.n_tx_until_depletion > 0);
  CHECK(r.n_tx_until_depletion == doctest::Approx(static_cast<double>(r.slots) / r.replications));
}

TEST_CASE("energy scale calibration is the median direct energy") {
  ScenarioConfig cfg;
  const double e0 = calibrate_energy_scale(cfg);
  CHECK(e0 > 0);
  CHECK(calibrate_energy_scale(cfg) == e0);
}

TEST_CASE("protocol trace is ordered within each slot") {
  const auto slots = protocol_trace(ScenarioConfig{}, Scheme::DsrDualHop, 50, 20);
  CHECK(slots.size() == 20);
  for (const auto& s : slots) {
    CHECK_FALSE(s.events.empty());
    CHECK(std::is_sorted(s.events.begin(), s.events.end(),
                         [](const auto& a, const auto& b) { return a.time_s < b.time_s; }));
  }
}
