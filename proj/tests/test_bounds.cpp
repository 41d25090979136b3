#include <cmath>
#include <map>
#include <string>

#include "d2dee/acceptance.hpp"
#include "d2dee/bounds.hpp"
#include "d2dee/errors.hpp"
#include "d2dee/simkit.hpp"
#include "doctest.h"

using namespace d2dee;
using namespace d2dee::bounds;

namespace {

ShadowScenario unit_scenario(int n) {
  ShadowScenario s;
  s.mean_snr_db = 20;
  s.sigma_db = 4;
  s.gamma_th_db = 3;
  s.eta1 = 1;
  s.eta2 = 0;
  s.n_devices = n;
  return s;
}

}  // namespace

TEST_CASE("direct oracle reference value and bracket") {
  const auto b = direct_bound(unit_scenario(1));
  CHECK(b.oracle == doctest::Approx(0.05230608974297469).epsilon(1e-9));
  REQUIRE(b.lower.has_value());
  CHECK(*b.lower <= b.oracle);
  CHECK(b.oracle <= b.upper);
  CHECK(b.closed_form_ok);
}

TEST_CASE("relay oracle reference values") {
  CHECK(relay_upper_bound(unit_scenario(2), RelayMethod::Quadrature).oracle ==
        doctest::Approx(0.04596955854711468).epsilon(1e-8));
  CHECK(relay_upper_bound(unit_scenario(10), RelayMethod::Quadrature).oracle ==
        doctest::Approx(0.03853784860359359).epsilon(1e-8));
}

TEST_CASE("relay oracle decreases in N and the closed form stays above it") {
  double prev = direct_bound(unit_scenario(1)).oracle;
  for (int n : {2, 3, 5, 10, 20, 40, 60}) {
    const auto b = relay_upper_bound(unit_scenario(n), RelayMethod::ClosedForm);
    CHECK(b.oracle < prev);
    CHECK(b.upper >= b.oracle * (1 - 1e-9));
    prev = b.oracle;
  }
}

TEST_CASE("psi closed form") {
  CHECK(psi_integral(1, 1, 1).value == doctest::Approx(0.4378134541011731).epsilon(1e-10));
  CHECK(psi_integral(4, 2, 0.5).value == doctest::Approx(0.5955533055907306).epsilon(1e-10));
  // Psi(N, ka, kb) = Psi(N, a, b) / k^2.
  for (double k : {0.5, 3.0}) {
    CHECK(psi_integral(2, k * 1.5, k * 0.7).value ==
          doctest::Approx(psi_integral(2, 1.5, 0.7).value / (k * k)).epsilon(1e-9));
  }
  for (double n : {0.5, 1.0, 7.0})
    CHECK(psi_integral(n, 1.3, 0.4).value == doctest::Approx(psi_quadrature(n, 1.3, 0.4)).epsilon(1e-8));
}

TEST_CASE("d2d quadrature reference and series agreement") {
  CHECK(d2d_quadrature(100, 2, 1000) == doctest::Approx(0.2606648532702924).epsilon(1e-9));
  const auto s = d2d_series(100, 2, 1000, 40);
  CHECK(s.value == doctest::Approx(0.2606648532702924).epsilon(1e-6));
}

TEST_CASE("d2d theorem bounds bracket the quadrature") {
  for (double m : {10.0, 100.0, 1000.0}) {
    D2dScenario s;
    s.mean_snr = m;
    s.pckt_min_w = 0.05;
    s.pckt_max_w = 0.15;
    const auto q = d2d_expected_energy(s, D2dMethod::Quadrature);
    const auto t = d2d_expected_energy(s, D2dMethod::TheoremBounds);
    REQUIRE(t.lower.has_value());
    CHECK(*t.lower <= q.oracle * (1 + 1e-9));
    CHECK(q.oracle <= t.upper * (1 + 1e-9));
  }
}

TEST_CASE("min of uniforms") {
  CHECK(min_uniform_mean(0, 1, 1) == doctest::Approx(0.5));
  CHECK(min_uniform_mean(0.1, 0.3, 3) == doctest::Approx(0.15));
  CHECK(min_uniform_mean(0.2, 0.2, 9) == doctest::Approx(0.2));
  const auto mc = sim::mc_min_uniform(0.1, 0.4, 7, 200000, 17);
  CHECK(std::fabs(mc.mean - min_uniform_mean(0.1, 0.4, 7)) < 4 * mc.stderr_);
}

TEST_CASE("Monte Carlo agrees with the oracles") {
  auto s = unit_scenario(1);
  const auto d = sim::mc_direct_energy(s, 200000, 3, 1);
  // The physical rate log2(1 + x) exceeds the bound's log-domain rate, so the
  // simulated energy sits inside the direct bracket.
  const auto b = direct_bound(s);
  CHECK(d.mean >= *b.lower);
  CHECK(d.mean <= b.upper);
  for (int n : {2, 10}) {
    s = unit_scenario(n);
    const auto r = sim::mc_relay_energy(s, 200000, 5, 1);
    CHECK(r.mean > 0);
    CHECK(r.mean <= relay_upper_bound(s, RelayMethod::ClosedForm).upper);
  }
}

TEST_CASE("relay Monte Carlo matches with distinct and equal circuit powers") {
  // Equal circuit powers use the inverse-CDF sampler, a tiny spread the brute force.
  auto s = unit_scenario(5);
  s.eta2 = 1.0;
  s.pckt_min_w = s.pckt_max_w = 0.1;
  const auto fast = sim::mc_relay_energy(s, 200000, 7, 1);
  s.pckt_max_w = 0.1 + 1e-12;
  const auto brute = sim::mc_relay_energy(s, 200000, 8, 1);
  CHECK(std::fabs(fast.mean - brute.mean) < 4 * std::hypot(fast.stderr_, brute.stderr_));
}

TEST_CASE("Monte Carlo is thread-count independent") {
  const auto s = unit_scenario(4);
  const auto a = sim::mc_relay_energy(s, 10000, 1, 1);
  const auto b = sim::mc_relay_energy(s, 10000, 1, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("closed-form audit matches the pinned counts") {
  std::map<std::string, std::pair<int, int>> got;
  for (const auto& r : audit_closed_forms()) {
    auto& c = got[r.form];
    c.first += r.ok;
    c.second += 1;
  }
  for (const auto& pin : acceptance::audit_pins()) {
    INFO(pin.form);
    REQUIRE(got.count(pin.form) == 1);
    CHECK(got[pin.form].first == pin.ok);
    CHECK(got[pin.form].second == pin.total);
  }
}

TEST_CASE("invalid scenarios are rejected") {
  auto s = unit_scenario(1);
  s.sigma_db = -1;
  CHECK_THROWS_AS(direct_bound(s), DomainError);
  s = unit_scenario(0);
  CHECK_THROWS_AS(relay_upper_bound(s, RelayMethod::ClosedForm), DomainError);
}
