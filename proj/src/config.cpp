// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dee/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include "d2dee/errors.hpp"

namespace d2dee {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want,
                            int line) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << key << ": cannot parse '" << value << "' as " << want;
  throw ConfigError(os.str(), key, line);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, int line) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  if (!value.empty() && value[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty()) bad_value(key, value, "a number", line);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "a boolean", line);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

struct Field {
  const char* key;
  const char* doc;
  std::function<void(ScenarioConfig&, const std::string&, int)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

Field number(const char* key, const char* doc, double ScenarioConfig::*m) {
  return {key, doc,
          [key, m](ScenarioConfig& c, const std::string& v, int line) {
            c.*m = parse_number<double>(key, v, line);
          },
          [m](const ScenarioConfig& c) { return format_double(c.*m); }};
}

template <class I>
Field integer(const char* key, const char* doc, I ScenarioConfig::*m) {
  return {key, doc,
          [key, m](ScenarioConfig& c, const std::string& v, int line) {
            c.*m = parse_number<I>(key, v, line);
          },
          [m](const ScenarioConfig& c) { return std::to_string(c.*m); }};
}

Field flag(const char* key, const char* doc, bool ScenarioConfig::*m) {
  return {key, doc,
          [key, m](ScenarioConfig& c, const std::string& v, int line) {
            c.*m = parse_bool(key, v, line);
          },
          [m](const ScenarioConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field text(const char* key, const char* doc, std::string ScenarioConfig::*m) {
  return {key, doc, [m](ScenarioConfig& c, const std::string& v, int) { c.*m = v; },
          [m](const ScenarioConfig& c) { return c.*m; }};
}

Field int_list(const char* key, const char* doc, std::vector<int> ScenarioConfig::*m) {
  return {key, doc,
          [key, m](ScenarioConfig& c, const std::string& v, int line) {
            std::vector<int> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item), line));
            if (out.empty()) bad_value(key, v, "a comma-separated list", line);
            c.*m = out;
          },
          [m](const ScenarioConfig& c) {
            std::string s;
            for (std::size_t i = 0; i < (c.*m).size(); ++i) s += (i ? "," : "") + std::to_string((c.*m)[i]);
            return s;
          }};
}

const std::vector<Field>& fields() {
  using C = ScenarioConfig;
  static const std::vector<Field> table = {
      integer("seed", "master seed for every random stream", &C::seed),
      integer("threads", "worker threads; 0 uses D2DEE_THREADS or hardware concurrency", &C::threads),
      text("layout", "device placement: ring | annulus | cluster", &C::layout),
      number("ring_radius_m", "ring layout: distance of every device to the BS", &C::ring_radius_m),
      number("annulus_r_min_m", "annulus/cluster layout: inner radius", &C::annulus_r_min_m),
      number("annulus_r_max_m", "annulus/cluster layout: outer radius", &C::annulus_r_max_m),
      number("cluster_radius_m", "cluster layout: devices lie within this radius of a random centre", &C::cluster_radius_m),
      integer("n_devices", "number of devices when no sweep is given", &C::n_devices),
      int_list("n_sweep", "device counts swept by bounds and simulate", &C::n_sweep),
      number("tx_power_dbm", "device transmit power towards the BS", &C::tx_power_dbm),
      number("d2d_tx_power_dbm", "device transmit power on D2D links", &C::d2d_tx_power_dbm),
      number("bandwidth_hz", "resource bandwidth", &C::bandwidth_hz),
      number("payload_bits", "payload size per transmission", &C::payload_bits),
      number("noise_psd_dbm_hz", "thermal noise density", &C::noise_psd_dbm_hz),
      number("interference_db", "interference rise over thermal noise at the BS", &C::interference_db),
      number("d2d_interference_db", "interference rise over thermal noise at devices", &C::d2d_interference_db),
      number("pathloss_alpha", "path-loss exponent towards the BS", &C::pathloss_alpha),
      number("pathloss_norm_g_db", "path-loss normalisation G towards the BS", &C::pathloss_norm_g_db),
      number("d2d_pathloss_alpha", "path-loss exponent on D2D links", &C::d2d_pathloss_alpha),
      number("sigma_db", "log-normal shadowing spread", &C::sigma_db),
      number("gamma_th_db", "BS-link SNR threshold", &C::gamma_th_db),
      number("pckt_min_w", "minimum device circuit power", &C::pckt_min_w),
      number("pckt_max_w", "maximum device circuit power", &C::pckt_max_w),
      flag("power_control", "pick the energy-optimal transmit power per BS transmission", &C::power_control),
      number("power_min_w", "power-control lower limit", &C::power_min_w),
      number("power_max_w", "power-control upper limit", &C::power_max_w),
      number("rtr_tx_uj", "request-to-relay transmit energy", &C::rtr_tx_uj),
      number("rtr_rx_uj", "request-to-relay receive energy per listener", &C::rtr_rx_uj),
      number("ctr_tx_uj", "clear-to-relay transmit energy", &C::ctr_tx_uj),
      number("ctr_rx_uj", "clear-to-relay receive energy", &C::ctr_rx_uj),
      number("csi_uj", "relay channel-estimation energy", &C::csi_uj),
      number("dec_uj", "relay decoding energy", &C::dec_uj),
      number("enc_uj", "relay re-encoding energy", &C::enc_uj),
      flag("zero_overhead", "ignore every control-message energy", &C::zero_overhead),
      number("tau_max_s", "back-off timer ceiling", &C::tau_max_s),
      number("tau_th_s", "grace period before the source transmits directly", &C::tau_th_s),
      number("collision_window_s", "CTRs closer than this collide", &C::collision_window_s),
      number("energy_scale_j", "back-off energy scale; 0 calibrates to the median direct energy", &C::energy_scale_j),
      number("d2d_range_m", "D2D communication range", &C::d2d_range_m),
      flag("whole_network", "every alive device is a relay candidate regardless of range", &C::whole_network),
      integer("replications", "independent campaign replications", &C::replications),
      integer("slots_per_replication", "transmission slots per replication", &C::slots_per_replication),
      flag("battery_mode", "run each replication until the first device depletes", &C::battery_mode),
      number("battery_mwh", "initial battery per device", &C::battery_mwh),
      integer("max_depletion_slots", "slot cap for battery mode", &C::max_depletion_slots),
      integer("mc_trials", "Monte Carlo trials per bounds row", &C::mc_trials),
      integer("m_segments", "segments of the scaling bound", &C::m_segments),
      number("c_max", "largest exponent c_M of the scaling bound", &C::c_max),
      integer("n_closed_form_max", "largest N evaluated with the binomial closed form", &C::n_closed_form_max),
      text("direct_upper_form", "partial_fraction | printed_arctan_of_square | printed_square_of_arctan", &C::direct_upper_form),
      number("corollary_z_max", "standardised upper limit of the Q-approximation integral", &C::corollary_z_max),
      number("q1", "Q(x) ~ exp(q1 x^2 + q2 x + q3)", &C::q1),
      number("q2", "Q(x) ~ exp(q1 x^2 + q2 x + q3)", &C::q2),
      number("q3", "Q(x) ~ exp(q1 x^2 + q2 x + q3)", &C::q3),
      number("d2d_gamma_th_linear", "D2D SNR threshold (linear)", &C::d2d_gamma_th_linear),
      number("d2d_gamma_max_factor", "D2D integrals end at this multiple of the mean SNR", &C::d2d_gamma_max_factor),
      integer("series_terms", "terms kept in the D2D exponential-integral series", &C::series_terms),
  };
  return table;
}

[[noreturn]] void semantic(const char* key, const std::string& why) {
  throw ConfigError(std::string(key) + ": " + why, key);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (layout != "ring" && layout != "annulus" && layout != "cluster")
    semantic("layout", "must be ring, annulus or cluster");
  if (!(ring_radius_m > 0)) semantic("ring_radius_m", "must be > 0");
  if (!(annulus_r_min_m >= 0)) semantic("annulus_r_min_m", "must be >= 0");
  if (!(annulus_r_min_m < annulus_r_max_m)) semantic("annulus_r_min_m", "must be < annulus_r_max_m");
  if (!(cluster_radius_m > 0)) semantic("cluster_radius_m", "must be > 0");
  if (layout == "cluster" && !(annulus_r_max_m - annulus_r_min_m > 2 * cluster_radius_m))
    semantic("cluster_radius_m", "cluster must fit inside the annulus");
  if (n_devices < 1) semantic("n_devices", "must be >= 1");
  for (int n : n_sweep)
    if (n < 1) semantic("n_sweep", "entries must be >= 1");
  if (!(bandwidth_hz > 0)) semantic("bandwidth_hz", "must be > 0");
  if (!(payload_bits > 0) || payload_bits != static_cast<double>(static_cast<long long>(payload_bits)))
    semantic("payload_bits", "must be a positive integer");
  if (!(pathloss_alpha > 0)) semantic("pathloss_alpha", "must be > 0");
  if (!(d2d_pathloss_alpha > 0)) semantic("d2d_pathloss_alpha", "must be > 0");
  if (!(sigma_db >= 0)) semantic("sigma_db", "must be >= 0");
  if (!(pckt_min_w >= 0)) semantic("pckt_min_w", "must be >= 0");
  if (!(pckt_min_w <= pckt_max_w)) semantic("pckt_max_w", "must be >= pckt_min_w");
  if (!(power_min_w >= 0 && power_min_w < power_max_w)) semantic("power_min_w", "need 0 <= power_min_w < power_max_w");
  for (auto [k, v] : {std::pair{"rtr_tx_uj", rtr_tx_uj}, {"rtr_rx_uj", rtr_rx_uj}, {"ctr_tx_uj", ctr_tx_uj},
                      {"ctr_rx_uj", ctr_rx_uj}, {"csi_uj", csi_uj}, {"dec_uj", dec_uj}, {"enc_uj", enc_uj}})
    if (!(v >= 0)) semantic(k, "must be >= 0");
  if (!(tau_max_s > 0)) semantic("tau_max_s", "must be > 0");
  if (!(tau_th_s > 0)) semantic("tau_th_s", "must be > 0");
  if (!(collision_window_s >= 0)) semantic("collision_window_s", "must be >= 0");
  if (!(energy_scale_j >= 0)) semantic("energy_scale_j", "must be >= 0");
  if (!(d2d_range_m > 0)) semantic("d2d_range_m", "must be > 0");
  if (replications < 1) semantic("replications", "must be >= 1");
  if (slots_per_replication < 1) semantic("slots_per_replication", "must be >= 1");
  if (!(battery_mwh > 0)) semantic("battery_mwh", "must be > 0");
  if (max_depletion_slots < 1) semantic("max_depletion_slots", "must be >= 1");
  if (mc_trials < 1) semantic("mc_trials", "must be >= 1");
  if (m_segments < 1) semantic("m_segments", "must be >= 1");
  if (!(c_max > 0 && c_max <= 1)) semantic("c_max", "must lie in (0, 1]");
  if (n_closed_form_max < 1) semantic("n_closed_form_max", "must be >= 1");
  if (direct_upper_form != "partial_fraction" && direct_upper_form != "printed_arctan_of_square" &&
      direct_upper_form != "printed_square_of_arctan")
    semantic("direct_upper_form", "unknown form");
  if (!(corollary_z_max > 0)) semantic("corollary_z_max", "must be > 0");
  if (!(d2d_gamma_th_linear > 0)) semantic("d2d_gamma_th_linear", "must be > 0");
  if (!(d2d_gamma_max_factor > 1)) semantic("d2d_gamma_max_factor", "must be > 1");
  if (series_terms < 1) semantic("series_terms", "must be >= 1");
  if (threads < 0) semantic("threads", "must be >= 0");
}

void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value, int line) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value, line);
      return;
    }
  }
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << "unknown key '" << key << "'";
  throw ConfigError(os.str(), key, line);
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", {}, line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key", {}, line);
    set_config_value(cfg, key, value, line);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  return out;
}

std::string defaults_dump() {
  const ScenarioConfig cfg;
  std::string out;
  for (const Field& f : fields())
    out += std::string("# ") + f.doc + "\n" + f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.key);
  return keys;
}

}  // namespace d2dee
