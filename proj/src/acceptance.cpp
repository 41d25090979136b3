// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "d2dee/bounds.hpp"
#include "d2dee/energy.hpp"
#include "d2dee/rng.hpp"
#include "d2dee/simkit.hpp"

namespace d2dee::acceptance {

namespace {

// Pinned tolerances.
constexpr double kSigmas = 3.0;
constexpr long kBoundTrials = 100000;
constexpr double kScalingRatioMax = 1.5;
constexpr double kCmax = 0.99;
constexpr int kSegments = 4;
constexpr double kSaturationRel = 0.15;
constexpr double kEfficiencyFactor = 3.0;
constexpr double kOrEnergyRel = 0.02;
constexpr int kOrSlots = 10000;
constexpr int kDepletionReplications = 200;
constexpr int kLemmaTriples = 20;
constexpr int kSolverCases = 100;
constexpr double kSolverResidualRel = 1e-9;
constexpr double kSeriesRel = 1e-4;
constexpr long kD2dTrials = 200000;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.se = std::sqrt(ss / (v.size() - 1.0) / static_cast<double>(v.size()));
  return m;
}

// se of a / b for independent estimates (conservative for positively correlated pairs).
double ratio_se(double a, double se_a, double b, double se_b) {
  return std::fabs(a / b) * std::hypot(se_a / a, se_b / b);
}

CriterionResult bound_sandwich(const Options& opt) {
  ScenarioConfig cfg = bound_verification_config();
  CriterionResult r{1, "bound_sandwich", true, {}};
  std::ostringstream m;
  const auto direct_s = sim::shadow_scenario(cfg, 1);
  const auto db = bounds::direct_bound(direct_s);
  const auto dmc = sim::mc_direct_energy(direct_s, kBoundTrials, opt.seed, opt.threads);
  const bool direct_ok = *db.lower <= dmc.mean + kSigmas * dmc.stderr_ &&
                         dmc.mean - kSigmas * dmc.stderr_ <= db.upper;
  r.pass = direct_ok;
  m << fmt("direct mc=%.6g+-%.2g in [%.6g, %.6g]%s;", dmc.mean, dmc.stderr_, *db.lower, db.upper,
           direct_ok ? "" : " VIOLATED");
  for (int n : {10, 100, 1000, 10000}) {
    const auto s = sim::shadow_scenario(cfg, n);
    const double upper = bounds::relay_upper_bound(s, bounds::RelayMethod::Quadrature).oracle;
    const auto mc = sim::mc_relay_energy(s, kBoundTrials, opt.seed + n, opt.threads);
    const bool ok = mc.mean <= upper + kSigmas * mc.stderr_;
    r.pass = r.pass && ok;
    m << fmt(" N=%d mc=%.6g+-%.2g <= %.6g%s;", n, mc.mean, mc.stderr_, upper, ok ? "" : " VIOLATED");
  }
  r.measured = m.str();
  return r;
}

CriterionResult scaling_law(const Options& opt) {
  ScenarioConfig cfg = bound_verification_config();
  CriterionResult r{2, "scaling_law", true, {}};
  std::ostringstream m;
  const auto schedule = bounds::quarter_step_schedule(kCmax, kSegments);
  double lo = INFINITY, hi = 0.0;
  for (int n : {100, 1000, 10000, 100000}) {
    const auto s = sim::shadow_scenario(cfg, n);
    const auto mc = sim::mc_relay_energy(s, kBoundTrials, opt.seed + 7 * n, opt.threads);
    const double product = mc.mean * (s.mean_snr_db + s.sigma_db * std::sqrt(kCmax * std::log(n)));
    const auto bound = bounds::scaling_upper_bound(s, schedule);
    lo = std::min(lo, product);
    hi = std::max(hi, product);
    m << fmt(" N=%d E=%.6g product=%.6g bound=%.6g;", n, mc.mean, product, bound.bound);
  }
  r.pass = hi / lo <= kScalingRatioMax;
  r.measured = fmt("max/min=%.4f (limit %.2f);", hi / lo, kScalingRatioMax) + m.str();
  return r;
}

CriterionResult diversity_saturation(const Options& opt) {
  ScenarioConfig cfg = campaign_config();
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  CriterionResult r{3, "diversity_saturation", true, {}};
  std::ostringstream m;
  for (sim::Scheme scheme : {sim::Scheme::DsrSingleHop, sim::Scheme::DsrDualHop}) {
    const auto a = sim::run_campaign(cfg, scheme, 15);
    const auto b = sim::run_campaign(cfg, scheme, 150);
    const double d = std::fabs(a.mean_energy_j / b.mean_energy_j - 1.0);
    const double se = ratio_se(a.mean_energy_j, a.mean_energy_stderr, b.mean_energy_j, b.mean_energy_stderr);
    const bool ok = d + kSigmas * se <= kSaturationRel;
    r.pass = r.pass && ok;
    m << fmt(" %s E15=%.6g E150=%.6g |rel|=%.4f+-%.4f;", sim::scheme_name(scheme), a.mean_energy_j,
             b.mean_energy_j, d, se);
  }
  r.measured = fmt("need |rel|+3se <= %.2f;", kSaturationRel) + m.str();
  return r;
}

CriterionResult efficiency_ordering(const Options& opt) {
  ScenarioConfig cfg = campaign_config();
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  CriterionResult r{4, "efficiency_ordering", true, {}};
  std::ostringstream m;
  for (int n : {30, 50, 100, 150}) {
    const auto dsr = sim::run_campaign(cfg, sim::Scheme::DsrSingleHop, n);
    const auto direct = sim::run_campaign(cfg, sim::Scheme::Direct, n);
    const double ratio = dsr.energy_efficiency_bpj / direct.energy_efficiency_bpj;
    const double se = ratio_se(dsr.energy_efficiency_bpj, dsr.energy_efficiency_stderr,
                               direct.energy_efficiency_bpj, direct.energy_efficiency_stderr);
    const bool ok = ratio - kSigmas * se >= kEfficiencyFactor;
    r.pass = r.pass && ok;
    m << fmt(" N=%d ee_ratio=%.4f+-%.4f;", n, ratio, se);
  }
  r.measured = fmt("need ratio-3se >= %.1f;", kEfficiencyFactor) + m.str();
  return r;
}

CriterionResult or_equivalence(const Options& opt) {
  CriterionResult r{5, "or_equivalence", true, {}};
  ScenarioConfig ideal = campaign_config();
  ideal.seed = opt.seed;
  ideal.threads = opt.threads;
  ideal.zero_overhead = true;
  ideal.pckt_min_w = ideal.pckt_max_w = 0.0;
  constexpr int kN = 150, kSlotsPerRep = 1000;
  int same = 0, relayed = 0, total = 0;
  for (int rep = 0; rep < kOrSlots / kSlotsPerRep; ++rep) {
    const auto dsr = sim::replay_slots(ideal, sim::Scheme::DsrSingleHop, kN, rep, kSlotsPerRep);
    const auto orr = sim::replay_slots(ideal, sim::Scheme::OrSingleHop, kN, rep, kSlotsPerRep);
    for (std::size_t i = 0; i < dsr.size(); ++i) {
      same += dsr[i].relay == orr[i].relay;
      relayed += dsr[i].relay >= 0;
      ++total;
    }
  }
  ScenarioConfig real = campaign_config();
  real.seed = opt.seed;
  real.threads = opt.threads;
  const auto dsr = sim::run_campaign(real, sim::Scheme::DsrSingleHop, 50);
  const auto orr = sim::run_campaign(real, sim::Scheme::OrSingleHop, 50);
  const double rel = std::fabs(dsr.mean_energy_j / orr.mean_energy_j - 1.0);
  r.pass = same == total && rel < kOrEnergyRel;
  r.measured = fmt("identical relay choice %d/%d slots (%d relayed); overhead case N=50 "
                   "E_dsr=%.6g E_or=%.6g rel=%.4f (limit %.2f)",
                   same, total, relayed, dsr.mean_energy_j, orr.mean_energy_j, rel, kOrEnergyRel);
  return r;
}

CriterionResult depletion_ordering(const Options& opt) {
  ScenarioConfig cfg = campaign_config();
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.battery_mode = true;
  cfg.replications = kDepletionReplications;
  constexpr int kN = 50;
  const auto dual = sim::run_campaign(cfg, sim::Scheme::DsrDualHop, kN);
  const auto single = sim::run_campaign(cfg, sim::Scheme::DsrSingleHop, kN);
  const auto direct = sim::run_campaign(cfg, sim::Scheme::Direct, kN);
  // Replication k uses the same network and channel draws in every scheme.
  std::vector<double> gap1, gap2;
  for (int k = 0; k < kDepletionReplications; ++k) {
    gap1.push_back(static_cast<double>(dual.per_replication[k].slots - single.per_replication[k].slots));
    gap2.push_back(static_cast<double>(single.per_replication[k].slots - direct.per_replication[k].slots));
  }
  const MeanSe g1 = mean_se(gap1), g2 = mean_se(gap2);
  CriterionResult r{6, "depletion_ordering", false, {}};
  r.pass = g1.mean > kSigmas * g1.se && g2.mean > kSigmas * g2.se;
  r.measured = fmt("N=%d dual=%.1f single=%.1f direct=%.1f; dual-single=%.1f+-%.1f "
                   "single-direct=%.1f+-%.1f (need gap > 3se)",
                   kN, dual.n_tx_until_depletion, single.n_tx_until_depletion,
                   direct.n_tx_until_depletion, g1.mean, g1.se, g2.mean, g2.se);
  return r;
}

CriterionResult lemma_min_uniform(const Options& opt) {
  CriterionResult r{7, "min_uniform_mean", true, {}};
  RandomStream rng(opt.seed, 7);
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < kLemmaTriples; ++i) {
    const double a = rng.uniform(0.0, 0.3);
    const double b = a + rng.uniform(0.0, 0.3);
    const int n = 1 + static_cast<int>(rng.uniform() * 100);
    const double closed = bounds::min_uniform_mean(a, b, n);
    const auto mc = sim::mc_min_uniform(a, b, n, kBoundTrials, opt.seed + i);
    const double z = std::fabs(mc.mean - closed) / mc.stderr_;
    worst = std::max(worst, z);
    ok += z <= kSigmas;
  }
  r.pass = ok == kLemmaTriples;
  r.measured = fmt("%d/%d triples within 3se; worst |z|=%.2f", ok, kLemmaTriples, worst);
  return r;
}

CriterionResult optimal_power_solver(const Options& opt) {
  CriterionResult r{8, "optimal_power", true, {}};
  RandomStream rng(opt.seed, 8);
  const energy::PowerInterval iv{};
  constexpr double kL = 8192, kB = 200e3;
  int interior = 0, ok = 0;
  double worst_residual = 0.0;
  for (int i = 0; i < kSolverCases; ++i) {
    const double g = std::pow(10.0, rng.uniform(0.0, 6.0));
    const double pckt = rng.uniform(0.01, 0.5);
    const double p = energy::optimal_power(g, pckt, iv);
    bool good = true;
    if (p > iv.min_w && p < iv.max_w) {
      ++interior;
      const double h = (1 + g * p) * std::log1p(g * p) - g * (p + pckt);
      const double rel = std::fabs(h) / (g * (p + pckt));
      worst_residual = std::max(worst_residual, rel);
      good = rel <= kSolverResidualRel;
    }
    const double e = energy::energy_per_payload_at_power(g, p, pckt, kL, kB);
    for (double f : {0.5, 1.5}) {
      const double q = std::clamp(p * f, iv.min_w, iv.max_w);
      good = good && e <= energy::energy_per_payload_at_power(g, q, pckt, kL, kB);
    }
    ok += good;
  }
  r.pass = ok == kSolverCases;
  r.measured = fmt("%d/%d cases optimal (%d interior roots, worst residual %.2e, limit %.0e)", ok,
                   kSolverCases, interior, worst_residual, kSolverResidualRel);
  return r;
}

CriterionResult d2d_sandwich(const Options& opt) {
  CriterionResult r{9, "d2d_sandwich", true, {}};
  std::ostringstream m;
  const ScenarioConfig cfg = campaign_config();
  for (double gb : {10.0, 50.0, 100.0, 500.0}) {
    bounds::D2dScenario s;
    s.mean_snr = gb;
    s.gamma_th = 2.0;
    s.pckt_min_w = cfg.pckt_min_w;
    s.pckt_max_w = cfg.pckt_max_w;
    const auto thm = bounds::d2d_expected_energy(s, bounds::D2dMethod::TheoremBounds);
    const auto series = bounds::d2d_expected_energy(s, bounds::D2dMethod::SeriesExact);
    const auto mc = sim::mc_d2d_energy(s, kD2dTrials, opt.seed + static_cast<std::uint64_t>(gb), opt.threads);
    const bool in = *thm.lower <= mc.mean + kSigmas * mc.stderr_ &&
                    mc.mean - kSigmas * mc.stderr_ <= thm.upper;
    const double rel = std::fabs(series.upper / series.oracle - 1.0);
    const bool ok = in && rel <= kSeriesRel;
    r.pass = r.pass && ok;
    m << fmt(" g=%g mc=%.5g+-%.2g in [%.5g, %.5g] series_rel=%.1e;", gb, mc.mean, mc.stderr_,
             *thm.lower, thm.upper, rel);
  }
  r.measured = m.str();
  return r;
}

CriterionResult closed_form_audit(const Options&) {
  CriterionResult r{10, "closed_form_audit", true, {}};
  std::map<std::string, std::pair<int, int>> counts;
  for (const auto& rec : bounds::audit_closed_forms()) {
    auto& c = counts[rec.form];
    c.first += rec.ok;
    ++c.second;
  }
  std::ostringstream m;
  int regressions = 0;
  std::string rejected;
  for (const AuditPin& pin : audit_pins()) {
    const auto it = counts.find(pin.form);
    const auto got = it == counts.end() ? std::pair{0, 0} : it->second;
    if (got.first != pin.ok || got.second != pin.total) {
      ++regressions;
      m << fmt(" %s %d/%d (pinned %d/%d);", pin.form, got.first, got.second, pin.ok, pin.total);
    }
    if (pin.ok < pin.total) rejected += fmt(" %s %d/%d", pin.form, pin.ok, pin.total);
  }
  if (counts.size() != audit_pins().size()) {
    ++regressions;
    m << " unpinned forms present;";
  }
  r.pass = regressions == 0;
  r.measured = fmt("%zu forms, %d regressions;", counts.size(), regressions) + m.str() +
               " not validating:" + rejected;
  return r;
}

}  // namespace

ScenarioConfig bound_verification_config() {
  ScenarioConfig c;
  c.layout = "ring";
  c.ring_radius_m = 300.0;
  c.sigma_db = 4.0;
  c.pathloss_alpha = 4.0;
  c.tx_power_dbm = 23.0;
  c.payload_bits = 16777216;
  c.interference_db = 0.0;
  c.pckt_min_w = 0.1;
  c.pckt_max_w = 0.1;
  c.zero_overhead = true;
  c.whole_network = true;
  c.n_sweep = {10, 100, 1000, 10000};
  return c;
}

ScenarioConfig campaign_config() { return ScenarioConfig{}; }

const std::vector<AuditPin>& audit_pins() {
  static const std::vector<AuditPin> pins = {
      {"direct_lower", 9, 9},
      {"direct_upper_partial_fraction", 9, 9},
      {"direct_upper_printed_arctan_of_square", 9, 9},
      {"direct_upper_printed_square_of_arctan", 9, 9},
      {"direct_i1_partial_fraction", 9, 9},
      {"direct_i1_printed_arctan_of_square", 0, 9},
      {"direct_i1_printed_square_of_arctan", 0, 9},
      {"direct_i2_exact", 9, 9},
      {"direct_i2_printed", 0, 9},
      {"relay_i1_partial_fraction", 27, 27},
      {"relay_i1_printed", 0, 27},
      {"relay_i2_chernoff", 27, 27},
      {"relay_sigma_i2_corollary", 3, 27},
      {"relay_upper_closed_form", 27, 27},
      {"relay_upper_closed_form_printed_i1", 27, 27},
      {"psi_closed_form", 7, 7},
      {"scaling_consistent", 12, 12},
      {"scaling_printed", 0, 12},
      {"d2d_series_log_argument", 4, 4},
      {"d2d_series_printed", 0, 4},
      {"d2d_theorem_lower", 4, 4},
      {"d2d_theorem_upper", 4, 4},
  };
  return pins;
}

std::vector<CriterionResult> run(const Options& opt,
                                 const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = CriterionResult (*)(const Options&);
  const Fn table[] = {bound_sandwich,      scaling_law,          diversity_saturation,
                      efficiency_ordering, or_equivalence,       depletion_ordering,
                      lemma_min_uniform,   optimal_power_solver, d2d_sandwich,
                      closed_form_audit};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end())
      continue;
    out.push_back(table[id - 1](opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s criterion %2d %-21s %s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
             r.measured.c_str());
}

}  // namespace d2dee::acceptance
