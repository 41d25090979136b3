// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
//
// d2dee: analytical bounds, relay-selection campaigns and protocol traces.
//
//   d2dee bounds         --config presets/fig3.cfg --out fig3.csv
//   d2dee simulate       --config presets/fig4.cfg --schemes dsr_single_hop,direct
//   d2dee protocol-trace --config presets/fig4.cfg --slots 3
//   d2dee verify
//   d2dee defaults
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 acceptance or sandwich failure,
// 4 numeric failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "d2dee/acceptance.hpp"
#include "d2dee/bounds.hpp"
#include "d2dee/config.hpp"
#include "d2dee/errors.hpp"
#include "d2dee/simkit.hpp"

namespace {

using namespace d2dee;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAcceptance = 3;
constexpr int kExitNumeric = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string n_sweep;
  std::string schemes = "dsr_single_hop,dsr_dual_hop,or_single_hop,or_dual_hop,direct";
  int slots = 5;
  std::string criteria;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ScenarioConfig load(const CommonArgs& a) {
  ScenarioConfig cfg = a.config_path.empty() ? ScenarioConfig{} : parse_config(a.config_path);
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.n_sweep.empty()) set_config_value(cfg, "n_sweep", a.n_sweep);
  cfg.validate();
  return cfg;
}

// Writes to --out when given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Every output starts with the tool version and the effective configuration.
void write_preamble(std::ostream& os, const char* command, const ScenarioConfig& cfg) {
  os << "# d2dee " << D2DEE_VERSION << " " << command << "\n";
  std::istringstream lines(config_to_text(cfg));
  for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
}

bounds::DirectUpperForm direct_form(const std::string& name) {
  if (name == "printed_arctan_of_square") return bounds::DirectUpperForm::PrintedArctanOfSquare;
  if (name == "printed_square_of_arctan") return bounds::DirectUpperForm::PrintedSquareOfArctan;
  return bounds::DirectUpperForm::PartialFraction;
}

int cmd_bounds(const CommonArgs& a) {
  const ScenarioConfig cfg = load(a);
  Output out(a.out_path);
  std::ostream& os = out.os();
  write_preamble(os, "bounds", cfg);
  os << "N,gamma_bar_db,sigma_db,lower_J,upper_J,oracle_J,mc_J,mc_stderr_J,closed_form_ok,"
        "scaling_J,envelope_J,sandwich_ok\n";

  bounds::RelayOptions ropt;
  ropt.n_closed_form_max = cfg.n_closed_form_max;
  ropt.corollary_z_max = cfg.corollary_z_max;
  ropt.q = {cfg.q1, cfg.q2, cfg.q3};
  const auto schedule = bounds::quarter_step_schedule(cfg.c_max, cfg.m_segments);
  bool all_ok = true;
  for (int n : cfg.n_sweep) {
    const auto s = sim::shadow_scenario(cfg, n);
    bounds::BoundPair b;
    sim::McEstimate mc;
    std::string scaling = "", envelope = "";
    bool ok;
    if (n == 1) {
      // One device has no relay to choose: the row is the direct-transmission bracket.
      b = bounds::direct_bound(s, {direct_form(cfg.direct_upper_form)});
      mc = sim::mc_direct_energy(s, cfg.mc_trials, cfg.seed, cfg.threads);
      ok = *b.lower <= mc.mean + 3 * mc.stderr_ && mc.mean - 3 * mc.stderr_ <= b.upper;
    } else {
      b = bounds::relay_upper_bound(s, bounds::RelayMethod::ClosedForm, ropt);
      mc = sim::mc_relay_energy(s, cfg.mc_trials, cfg.seed + static_cast<std::uint64_t>(n), cfg.threads);
      ok = mc.mean <= b.upper + 3 * mc.stderr_ && mc.mean <= b.oracle + 3 * mc.stderr_;
      const auto sc = bounds::scaling_upper_bound(s, schedule);
      scaling = num(sc.bound);
      envelope = num(sc.envelope);
    }
    all_ok = all_ok && ok;
    os << n << "," << num(s.mean_snr_db) << "," << num(s.sigma_db) << ","
       << (b.lower ? num(*b.lower) : "") << "," << num(b.upper) << "," << num(b.oracle) << ","
       << num(mc.mean) << "," << num(mc.stderr_) << "," << (b.closed_form_ok ? 1 : 0) << ","
       << scaling << "," << envelope << "," << (ok ? 1 : 0) << "\n";
  }
  if (!all_ok) std::cerr << "bounds: Monte Carlo mean outside its bounds for at least one N\n";
  return all_ok ? 0 : kExitAcceptance;
}

std::vector<sim::Scheme> parse_schemes(const std::string& list) {
  std::vector<sim::Scheme> out;
  // A misspelt scheme on the command line is a usage error, not a config error.
  try {
    for (const auto& name : split(list)) out.push_back(sim::scheme_from_name(name));
  } catch (const ConfigError& e) {
    throw CLI::ValidationError("--schemes", e.what());
  }
  return out;
}

int cmd_simulate(const CommonArgs& a) {
  const auto schemes = parse_schemes(a.schemes);
  if (schemes.empty()) throw CLI::ValidationError("--schemes", "at least one scheme is required");
  const ScenarioConfig cfg = load(a);
  Output out(a.out_path);
  std::ostream& os = out.os();
  write_preamble(os, "simulate", cfg);
  os << "scheme,N,layout,mean_energy_J,mean_energy_stderr,ee_bpJ,ee_stderr,n_tx_depletion,"
        "n_tx_depletion_stderr,relay_fraction,relay_fraction_stderr\n";
  for (int n : cfg.n_sweep) {
    for (sim::Scheme s : schemes) {
      const auto r = sim::run_campaign(cfg, s, n);
      os << sim::scheme_name(s) << "," << n << "," << r.layout << "," << num(r.mean_energy_j) << ","
         << num(r.mean_energy_stderr) << "," << num(r.energy_efficiency_bpj) << ","
         << num(r.energy_efficiency_stderr) << "," << num(r.n_tx_until_depletion) << ","
         << num(r.n_tx_until_depletion_stderr) << "," << num(r.relay_fraction) << ","
         << num(r.relay_fraction_stderr) << "\n";
    }
  }
  return 0;
}

int cmd_trace(const CommonArgs& a) {
  const auto schemes = parse_schemes(a.schemes);
  if (schemes.empty()) throw CLI::ValidationError("--schemes", "at least one scheme is required");
  if (a.slots < 1) throw CLI::ValidationError("--slots", "must be >= 1");
  const ScenarioConfig cfg = load(a);
  Output out(a.out_path);
  std::ostream& os = out.os();
  write_preamble(os, "protocol-trace", cfg);
  os << "# scheme = " << sim::scheme_name(schemes.front()) << ", n_devices = " << cfg.n_devices << "\n";
  os << "slot,time_s,device_id,event_kind,energy_J\n";
  for (const auto& t : sim::protocol_trace(cfg, schemes.front(), cfg.n_devices, a.slots)) {
    const auto& o = t.outcome;
    os << "# slot " << t.slot << ": source " << t.source << ", path "
       << (o.path == energy::Path::Relayed ? "relayed" : "direct");
    if (o.relay_id) os << " via " << *o.relay_id;
    if (schemes.front() != sim::Scheme::Direct)
      os << ", reason " << protocol::reason_name(o.reason) << ", stray CTRs " << o.stray_ctrs
         << ", latency_s " << num(o.latency_s);
    os << "\n";
    for (const auto& e : t.events)
      os << t.slot << "," << num(e.time_s) << "," << e.device_id << ","
         << protocol::event_name(e.kind) << "," << num(e.energy_j) << "\n";
  }
  return 0;
}

int cmd_verify(const CommonArgs& a) {
  const ScenarioConfig cfg = load(a);
  Output out(a.out_path);
  std::ostream& os = out.os();
  os << "# d2dee " << D2DEE_VERSION << " verify seed=" << cfg.seed << "\n";
  acceptance::Options opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  for (const auto& id : split(a.criteria)) opt.only.push_back(std::stoi(id));
  int failed = 0;
  const auto results = acceptance::run(opt, [&](const acceptance::CriterionResult& r) {
    os << acceptance::format_result(r) << std::endl;
    failed += !r.pass;
  });
  os << "summary: " << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed ? kExitAcceptance : 0;
}

int cmd_defaults(const CommonArgs& a) {
  Output out(a.out_path);
  out.os() << "# d2dee " << D2DEE_VERSION << " defaults\n" << defaults_dump();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware D2D relay selection: bounds, campaigns, protocol traces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("d2dee ") + D2DEE_VERSION);
  CommonArgs args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "scenario file (key = value lines)")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_path, "output file (default stdout)");
    sub->add_option("--seed", args.seed, "master seed, overrides the config");
    sub->add_option("--threads", args.threads, "worker threads (fallback: D2DEE_THREADS)")->check(CLI::NonNegativeNumber);
  };
  auto* bounds_cmd = app.add_subcommand("bounds", "analytical bounds with a Monte Carlo column per N");
  add_common(bounds_cmd);
  bounds_cmd->add_option("--n-sweep", args.n_sweep, "comma list of device counts");
  auto* sim_cmd = app.add_subcommand("simulate", "campaign metrics per scheme and N");
  add_common(sim_cmd);
  sim_cmd->add_option("--n-sweep", args.n_sweep, "comma list of device counts");
  sim_cmd->add_option("--schemes", args.schemes, "comma list of schemes");
  auto* trace_cmd = app.add_subcommand("protocol-trace", "event log of the first contention rounds");
  add_common(trace_cmd);
  trace_cmd->add_option("--schemes", args.schemes, "scheme to trace (first entry is used)");
  trace_cmd->add_option("--slots", args.slots, "number of slots to trace");
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify_cmd);
  verify_cmd->add_option("--criteria", args.criteria, "comma list of criterion ids (default all)");
  auto* defaults_cmd = app.add_subcommand("defaults", "print every configuration key with its default");
  defaults_cmd->add_option("--out", args.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
    if (*bounds_cmd) return cmd_bounds(args);
    if (*sim_cmd) return cmd_simulate(args);
    if (*trace_cmd) return cmd_trace(args);
    if (*verify_cmd) return cmd_verify(args);
    if (*defaults_cmd) return cmd_defaults(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SolverFailure& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const RangeError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
