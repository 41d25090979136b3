#include <cmath>
#include <random>
#include <vector>

#include "d2dee/energy.hpp"
#include "d2dee/errors.hpp"
#include "doctest.h"

using namespace d2dee;
using namespace d2dee::energy;
using channel::Hop;
using channel::SnrSample;

TEST_CASE("direct energy at integer rates") {
  const RadioParams p;  // 0.2 W + 0.1 W, 8192 bits over 200 kHz
  const auto e1 = direct_energy(SnrSample::from_linear(1.0, Hop::ToBaseStation), p);
  CHECK(e1.total() == doctest::Approx(0.012288).epsilon(1e-14));
  CHECK(e1.data_tx_j == doctest::Approx(0.008192).epsilon(1e-14));
  CHECK(e1.circuit_j == doctest::Approx(0.004096).epsilon(1e-14));
  const auto e3 = direct_energy(SnrSample::from_linear(3.0, Hop::ToBaseStation), p);
  CHECK(e3.total() == doctest::Approx(0.006144).epsilon(1e-14));
  const auto e10 = direct_energy(SnrSample::from_linear(10.0, Hop::ToBaseStation), p);
  CHECK(e10.total() == doctest::Approx(0.003552028585794206).epsilon(1e-13));
}

TEST_CASE("threshold flag does not change the energy") {
  const RadioParams p;
  const auto s = SnrSample::from_linear(2.0, Hop::ToBaseStation);
  const auto below = direct_energy(s, p, 3.0);
  const auto above = direct_energy(s, p, 1.0);
  CHECK(below.below_threshold);
  CHECK_FALSE(above.below_threshold);
  CHECK(below.total() == above.total());
}

TEST_CASE("d2d energy equals the direct formula for the same SNR") {
  const RadioParams p;
  const auto e = d2d_energy(SnrSample::from_linear(std::expm1(1.0), Hop::DeviceToDevice), p);
  CHECK(e.total() == doctest::Approx(0.3 * 8192 / 2e5 * std::log(2.0)).epsilon(1e-13));
  CHECK(e.data_tx_j == doctest::Approx(p.eta1()).epsilon(1e-13));
  for (double g : {0.01, 1.0, 37.0, 1e4}) {
    const double a = d2d_energy(SnrSample::from_linear(g, Hop::DeviceToDevice), p).total();
    const double b = direct_energy(SnrSample::from_linear(g, Hop::ToBaseStation), p).total();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  CHECK_THROWS_AS(d2d_energy(SnrSample::from_linear(1.0, Hop::ToBaseStation), p),
                  ContractViolation);
}

TEST_CASE("energy decreases with SNR") {
  const RadioParams p;
  double prev = INFINITY;
  for (double db = -10; db <= 40; db += 0.5) {
    const double e = direct_energy(SnrSample::from_db(db, Hop::ToBaseStation), p).total();
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("energy inputs are validated") {
  RadioParams p;
  CHECK_THROWS_AS(direct_energy(SnrSample::from_linear(0.0, Hop::ToBaseStation), p), DomainError);
  p.bandwidth_hz = 0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = {};
  p.payload_bits = 10.5;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
}

TEST_CASE("optimal power reference roots") {
  CHECK(optimal_power(1.0, 0.1, {1e-6, 10.0}) == doctest::Approx(0.4794327174332244).epsilon(1e-10));
  CHECK(optimal_power(1e4, 0.1, {1e-6, 10.0}) == doctest::Approx(0.02249924527815866).epsilon(1e-10));
}

TEST_CASE("optimal power satisfies the stationarity condition or sits on a bound") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> exp10(0.0, 6.0), pc(0.01, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double g = std::pow(10.0, exp10(gen));
    const double pckt = pc(gen);
    const PowerInterval iv{1e-3, 0.2};
    const double p = optimal_power(g, pckt, iv);
    REQUIRE(p >= iv.min_w);
    REQUIRE(p <= iv.max_w);
    const auto f = [&](double x) { return energy_per_payload_at_power(g, x, pckt, 8192, 2e5); };
    if (p > iv.min_w && p < iv.max_w) {
      const double y = 1.0 + g * p;
      CHECK(std::fabs(y * std::log(y) - g * (p + pckt)) <= 1e-9 * g * (p + pckt));
    }
    // No perturbation inside the interval does better.
    for (double d : {-1e-3, 1e-3, -1e-2, 1e-2}) {
      const double q = std::clamp(p * (1 + d), iv.min_w, iv.max_w);
      CHECK(f(q) >= f(p) * (1 - 1e-12));
    }
  }
}

TEST_CASE("optimal power rejects bad inputs") {
  CHECK_THROWS_AS(optimal_power(0.0, 0.1, {}), DomainError);
  CHECK_THROWS_AS(optimal_power(1.0, -0.1, {}), DomainError);
  CHECK_THROWS_AS(optimal_power(1.0, 0.1, {0.3, 0.2}), DomainError);
}

TEST_CASE("selection metric by mode") {
  CHECK(selection_metric(1.0, 2.0, 0.5, SelectionMode::DualHop) == 3.5);
  CHECK(selection_metric(1.0, 2.0, 0.5, SelectionMode::SingleHop) == 1.0);
  CHECK_THROWS_AS(selection_metric(-1.0, 0, 0, SelectionMode::SingleHop), DomainError);
}

TEST_CASE("ledger totals are exact and order independent") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 0.01);
  struct Charge {
    int id;
    Category c;
    double j;
  };
  std::vector<Charge> charges;
  for (int i = 0; i < 5000; ++i) charges.push_back({static_cast<int>(gen() % 17), static_cast<Category>(gen() % 3), u(gen)});
  EnergyLedger fwd, rev;
  for (const auto& c : charges) fwd.charge(c.id, c.c, c.j);
  for (auto it = charges.rbegin(); it != charges.rend(); ++it) rev.charge(it->id, it->c, it->j);
  const auto a = fwd.breakdown(Path::Relayed), b = rev.breakdown(Path::Relayed);
  CHECK(a.total_j == b.total_j);
  CHECK(a.data_tx_j + a.circuit_j + a.overhead_j == doctest::Approx(a.total_j).epsilon(1e-15));
  std::int64_t q = 0;
  for (const auto& [id, j] : fwd.per_device()) q += EnergyLedger::to_quanta(j);
  CHECK(EnergyLedger::from_quanta(q) == a.total_j);
  CHECK(fwd.per_device() == rev.per_device());
  CHECK_THROWS_AS(fwd.charge(0, Category::Data, -1.0), DomainError);
  CHECK_THROWS_AS(fwd.charge(0, Category::Data, 1e6), RangeError);
}
