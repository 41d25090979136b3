#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "d2dee/channel.hpp"
#include "d2dee/errors.hpp"
#include "doctest.h"

using namespace d2dee;
using namespace d2dee::channel;

namespace {

// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

// Critical value at significance 0.01 for large n.
double ks_critical_001(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

LognormalLinkParams bs_params(double mean_db, double sigma_db) {
  LognormalLinkParams p;
  p.distance_m = 1.0;
  p.pathloss_norm_g_db = 0.0;
  p.tx_power_w = db_to_linear(mean_db);
  p.noise_w = 1.0;
  p.shadow_sigma_db = sigma_db;
  return p;
}

}  // namespace

TEST_CASE("mean SNR is the three-term sum") {
  CHECK(mean_snr_db(bs_params(0.0, 4.0)) == doctest::Approx(0.0).epsilon(1e-15));
  LognormalLinkParams p;
  p.distance_m = 300;
  p.pathloss_alpha = 4;
  p.tx_power_w = 1e13;
  p.noise_w = 1.0;
  CHECK(mean_snr_db(p) == doctest::Approx(130.0 - 40.0 * std::log10(300.0)).epsilon(1e-14));
  const double base = mean_snr_db(p);
  p.distance_m = 600;
  CHECK(base - mean_snr_db(p) == doctest::Approx(40.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("SNR samples keep dB and linear values consistent") {
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto s = sample_bs_snr(bs_params(20, 4), rng);
    CHECK(std::fabs(s.value_linear / std::pow(10.0, s.value_db / 10.0) - 1.0) < 1e-12);
    CHECK(s.hop == Hop::ToBaseStation);
  }
  const auto d = SnrSample::from_linear(250.0, Hop::DeviceToDevice);
  CHECK(d.value_db == doctest::Approx(10.0 * std::log10(250.0)));
}

TEST_CASE("zero shadowing is deterministic") {
  RandomStream rng(2);
  for (int i = 0; i < 10; ++i) CHECK(sample_bs_snr(bs_params(17.5, 0.0), rng).value_db == doctest::Approx(17.5));
}

TEST_CASE("shadowing moments and distribution") {
  RandomStream rng(3);
  constexpr int kN = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> ks;
  ks.reserve(100000);
  for (int i = 0; i < kN; ++i) {
    const double x = sample_bs_snr(bs_params(20, 4), rng).value_db;
    sum += x;
    sum_sq += x * x;
    if (i < 100000) ks.push_back(x);
  }
  const double mean = sum / kN;
  const double var = sum_sq / kN - mean * mean;
  CHECK(std::fabs(mean - 20.0) < 0.02);
  CHECK(std::fabs(var - 16.0) < 0.1);
  const boost::math::normal_distribution<double> ref(20.0, 4.0);
  CHECK(ks_statistic(ks, [&](double x) { return boost::math::cdf(ref, x); }) < ks_critical_001(ks.size()));
}

TEST_CASE("Rayleigh D2D SNR is exponential with the path-loss mean") {
  RayleighLinkParams p;
  p.distance_m = 1.0;
  p.pathloss_alpha = 3.0;
  p.tx_power_w = 100.0;
  p.noise_w = 1.0;
  CHECK(mean_d2d_snr(p) == doctest::Approx(100.0));
  RandomStream rng(4);
  constexpr int kN = 1000000;
  double sum = 0.0;
  int above = 0;
  std::vector<double> ks;
  for (int i = 0; i < kN; ++i) {
    const auto s = sample_d2d_snr(p, rng);
    CHECK(s.hop == Hop::DeviceToDevice);
    sum += s.value_linear;
    above += s.value_linear > 100.0;
    if (i < 100000) ks.push_back(s.value_linear);
  }
  CHECK(std::fabs(sum / kN - 100.0) < 0.3);
  CHECK(std::fabs(static_cast<double>(above) / kN - std::exp(-1.0)) < 0.002);
  CHECK(ks_statistic(ks, [](double x) { return -std::expm1(-x / 100.0); }) < ks_critical_001(ks.size()));

  RayleighLinkParams far = p;
  far.distance_m = 2.0;
  CHECK(mean_d2d_snr(far) == doctest::Approx(mean_d2d_snr(p) / 8.0));
}

TEST_CASE("streams are reproducible and keyed") {
  RandomStream a(9, 1, 2), b(9, 1, 2), c(9, 2, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a(), vb = b(), vc = c();
    CHECK(va == vb);
    differs = differs || va != vc;
  }
  CHECK(differs);
}

TEST_CASE("invalid link parameters are rejected") {
  LognormalLinkParams p;
  p.distance_m = 0.0;
  CHECK_THROWS_AS(mean_snr_db(p), ContractViolation);
  p = {};
  p.shadow_sigma_db = -1.0;
  CHECK_THROWS_AS(mean_snr_db(p), ContractViolation);
  RayleighLinkParams r;
  r.noise_w = 0.0;
  CHECK_THROWS_AS(mean_d2d_snr(r), ContractViolation);
}
