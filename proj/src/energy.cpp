// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/energy.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "d2dee/errors.hpp"

namespace d2dee::energy {

void RadioParams::validate() const {
  if (!(tx_power_w > 0 && circuit_power_w >= 0 && payload_bits > 0 && bandwidth_hz > 0))
    throw ContractViolation("RadioParams: powers, payload and bandwidth must be positive");
  if (payload_bits != std::floor(payload_bits))
    throw ContractViolation("RadioParams: payload_bits must be an integer");
}

double RadioParams::eta1() const {
  return std::numbers::ln2 * tx_power_w * payload_bits / bandwidth_hz;
}

double RadioParams::eta2() const { return eta1() / tx_power_w; }

namespace {

void require_positive_snr(const channel::SnrSample& snr) {
  if (!(snr.value_linear > 0) || !std::isfinite(snr.value_linear))
    throw DomainError("energy: SNR must be positive and finite");
}

}  // namespace

HopEnergy direct_energy(const channel::SnrSample& snr, const RadioParams& p,
                        double gamma_th_linear) {
  require_positive_snr(snr);
  const double airtime = p.payload_bits / (p.bandwidth_hz * std::log2(1.0 + snr.value_linear));
  HopEnergy e;
  e.data_tx_j = p.tx_power_w * airtime;
  e.circuit_j = p.circuit_power_w * airtime;
  e.below_threshold = snr.value_linear < gamma_th_linear;
  return e;
}

HopEnergy d2d_energy(const channel::SnrSample& snr, const RadioParams& p,
                     double gamma_th_linear) {
  if (snr.hop != channel::Hop::DeviceToDevice)
    throw ContractViolation("d2d_energy: sample is not a device-to-device hop");
  require_positive_snr(snr);
  const double rate = std::log1p(snr.value_linear);
  HopEnergy e;
  e.data_tx_j = p.eta1() / rate;
  e.circuit_j = p.eta2() * p.circuit_power_w / rate;
  e.below_threshold = snr.value_linear < gamma_th_linear;
  return e;
}

double transmission_time_s(const channel::SnrSample& snr, const RadioParams& p) {
  require_positive_snr(snr);
  return p.payload_bits / (p.bandwidth_hz * std::log2(1.0 + snr.value_linear));
}

double energy_per_payload_at_power(double g, double power_w, double pckt_w, double payload_bits,
                                   double bandwidth_hz) {
  return (power_w + pckt_w) * payload_bits / (bandwidth_hz * std::log2(1.0 + g * power_w));
}

double optimal_power(double g, double pckt_w, const PowerInterval& interval) {
  if (!(g > 0) || !std::isfinite(g)) throw DomainError("optimal_power: g must be positive");
  if (!(pckt_w >= 0)) throw DomainError("optimal_power: Pckt must be >= 0");
  if (!(interval.min_w >= 0 && interval.min_w < interval.max_w))
    throw DomainError("optimal_power: need 0 <= Pmin < Pmax");

  // h is increasing (h' = g ln(1+gP) > 0), so the energy is unimodal with
  // minimum at the root of h; outside the interval the nearer end wins.
  auto h = [&](double power) {
    const double x = g * power;
    return (1.0 + x) * std::log1p(x) - g * (power + pckt_w);
  };
  const double h_lo = h(interval.min_w);
  const double h_hi = h(interval.max_w);
  if (h_lo >= 0) return interval.min_w;
  if (h_hi <= 0) return interval.max_w;

  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      h, interval.min_w, interval.max_w, h_lo, h_hi,
      boost::math::tools::eps_tolerance<double>(52), iterations);
  const double root = std::fabs(h(bracket.first)) <= std::fabs(h(bracket.second))
                          ? bracket.first
                          : bracket.second;
  const double residual = std::fabs(h(root));
  if (!(residual <= 1e-9 * g * (root + pckt_w))) {
    std::ostringstream os;
    os << "optimal_power: residual " << residual << " after " << iterations
       << " iterations (g=" << g << ", Pckt=" << pckt_w << ", bracket=[" << bracket.first << ", "
       << bracket.second << "])";
    throw SolverFailure(os.str());
  }
  return root;
}

double selection_metric(double e_second_hop, double e_d2d, double e_overhead, SelectionMode mode) {
  if (!(e_second_hop >= 0 && e_d2d >= 0 && e_overhead >= 0))
    throw DomainError("selection_metric: energies must be >= 0");
  return mode == SelectionMode::DualHop ? e_second_hop + e_d2d + e_overhead : e_second_hop;
}

std::int64_t EnergyLedger::to_quanta(double joules) {
  if (!(joules >= 0) || !std::isfinite(joules))
    throw DomainError("EnergyLedger: charges must be finite and >= 0");
  if (joules > 1e5) throw RangeError("EnergyLedger: charge exceeds ledger range");
  return std::llround(joules / kQuantumJ);
}

void EnergyLedger::charge(int device_id, Category category, double joules) {
  charges_[device_id][static_cast<int>(category)] += to_quanta(joules);
}

void EnergyLedger::charge(int device_id, const HopEnergy& hop) {
  charge(device_id, Category::Data, hop.data_tx_j);
  charge(device_id, Category::Circuit, hop.circuit_j);
}

EnergyBreakdown EnergyLedger::breakdown(Path path) const {
  std::array<std::int64_t, 3> sums{};
  for (const auto& [id, q] : charges_)
    for (int c = 0; c < 3; ++c) sums[c] += q[c];
  EnergyBreakdown b;
  b.data_tx_j = from_quanta(sums[0]);
  b.circuit_j = from_quanta(sums[1]);
  b.overhead_j = from_quanta(sums[2]);
  b.total_j = from_quanta(sums[0] + sums[1] + sums[2]);
  b.path = path;
  return b;
}

std::vector<std::pair<int, double>> EnergyLedger::per_device() const {
  std::vector<std::pair<int, double>> out;
  out.reserve(charges_.size());
  for (const auto& [id, q] : charges_) out.emplace_back(id, from_quanta(q[0] + q[1] + q[2]));
  return out;
}

}  // namespace d2dee::energy
