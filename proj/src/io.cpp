#include "cqed/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed::io {

namespace {

double get_num(const json& j, const std::string& ctx, const std::string& key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing key '" + key + "'");
  if (!j.at(key).is_number())
    throw ConfigError(ctx + ": key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double get_num_or(const json& j, const std::string& ctx, const std::string& key,
                  double fallback) {
  return j.contains(key) ? get_num(j, ctx, key) : fallback;
}

std::string get_str(const json& j, const std::string& ctx,
                    const std::string& key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing key '" + key + "'");
  if (!j.at(key).is_string())
    throw ConfigError(ctx + ": key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_grid(const json& j, const std::string& ctx,
                             const std::string& key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number())
        throw ConfigError(ctx + ": '" + key + "' entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  if (v.is_object()) {
    std::string sub = ctx + "." + key;
    require_keys(v, sub, {"start", "stop", "points"});
    double start = get_num(v, sub, "start");
    double stop = get_num(v, sub, "stop");
    int points = static_cast<int>(get_num(v, sub, "points"));
    if (points < 2) throw ConfigError(sub + ": points must be >= 2");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
      out[i] = start + (stop - start) * i / static_cast<double>(points - 1);
    return out;
  }
  throw ConfigError(ctx + ": '" + key +
                    "' must be an array or a {start, stop, points} object");
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

void require_keys(const json& obj, const std::string& context,
                  const std::vector<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigError(context + ": expected a JSON object");
  for (const auto& item : obj.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ConfigError(context + ": unknown key '" + item.key() + "'");
}

fock::DeviceSpec device_from_json(const json& j) {
  require_keys(j, "device",
               {"omega_q_MHz", "alpha_MHz", "beta_photons_per_nW",
                "zeta_MHz2_per_nW", "modes"});
  fock::DeviceSpec spec;
  spec.omega_q = get_num(j, "device", "omega_q_MHz");
  spec.alpha = get_num(j, "device", "alpha_MHz");
  spec.beta = get_num_or(j, "device", "beta_photons_per_nW", 0.0);
  spec.zeta = get_num_or(j, "device", "zeta_MHz2_per_nW", 0.0);
  if (!j.contains("modes") || !j.at("modes").is_array())
    throw ConfigError("device: 'modes' must be an array");
  for (const auto& m : j.at("modes")) {
    require_keys(m, "device.modes[]",
                 {"name", "omega_MHz", "g_MHz", "kappa_MHz", "Q"});
    fock::ModeSpec ms;
    ms.name = get_str(m, "device.modes[]", "name");
    ms.omega = get_num(m, "device.modes[]", "omega_MHz");
    ms.g = get_num(m, "device.modes[]", "g_MHz");
    ms.kappa = get_num(m, "device.modes[]", "kappa_MHz");
    if (m.contains("Q")) ms.Q = get_num(m, "device.modes[]", "Q");
    spec.modes.push_back(std::move(ms));
  }
  spec.validate();
  return spec;
}

json device_to_json(const fock::DeviceSpec& spec) {
  json j;
  j["omega_q_MHz"] = spec.omega_q;
  j["alpha_MHz"] = spec.alpha;
  j["beta_photons_per_nW"] = spec.beta;
  j["zeta_MHz2_per_nW"] = spec.zeta;
  j["modes"] = json::array();
  for (const auto& m : spec.modes) {
    json mj;
    mj["name"] = m.name;
    mj["omega_MHz"] = m.omega;
    mj["g_MHz"] = m.g;
    mj["kappa_MHz"] = m.kappa;
    if (m.Q) mj["Q"] = *m.Q;
    j["modes"].push_back(std::move(mj));
  }
  return j;
}

lattice::LatticeSpec lattice_from_json(const json& j) {
  require_keys(j, "lattice",
               {"n_sites", "omega0_MHz", "hopping_MHz", "edges", "qubit_site",
                "g0_MHz", "dos_bin_width_MHz"});
  lattice::LatticeSpec spec;
  spec.n_sites = static_cast<int>(get_num(j, "lattice", "n_sites"));
  spec.omega0 = get_num(j, "lattice", "omega0_MHz");
  spec.hopping = get_num(j, "lattice", "hopping_MHz");
  spec.qubit_site = static_cast<int>(get_num(j, "lattice", "qubit_site"));
  spec.g0 = get_num(j, "lattice", "g0_MHz");
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw ConfigError("lattice: 'edges' must be an array of [a, b] pairs");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw ConfigError("lattice: 'edges' must be an array of [a, b] pairs");
    spec.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  spec.validate();
  return spec;
}

json lattice_to_json(const lattice::LatticeSpec& spec) {
  json j;
  j["n_sites"] = spec.n_sites;
  j["omega0_MHz"] = spec.omega0;
  j["hopping_MHz"] = spec.hopping;
  j["edges"] = json::array();
  for (auto [a, b] : spec.edges) j["edges"].push_back(json::array({a, b}));
  j["qubit_site"] = spec.qubit_site;
  j["g0_MHz"] = spec.g0;
  return j;
}

synth::ScanPlan plan_from_json(const json& j) {
  require_keys(j, "scan",
               {"kind", "powers_nW", "pump_grid_MHz", "probe_freq_MHz",
                "sensor_mode", "target", "noise_sigma", "drift_rate_rad",
                "line_width_MHz", "line_depth", "background"});
  synth::ScanPlan plan;
  std::string kind = get_str(j, "scan", "kind");
  if (kind == "stark")
    plan.kind = synth::ScanKind::stark;
  else if (kind == "stark_monitor")
    plan.kind = synth::ScanKind::stark_monitor;
  else if (kind == "kerr")
    plan.kind = synth::ScanKind::kerr;
  else
    throw ConfigError("scan: kind must be stark, stark_monitor or kerr");
  plan.powers = get_grid(j, "scan", "powers_nW");
  plan.pump_grid = get_grid(j, "scan", "pump_grid_MHz");
  plan.probe_freq = get_num_or(j, "scan", "probe_freq_MHz", 0.0);
  if (j.contains("sensor_mode"))
    plan.sensor_mode = get_str(j, "scan", "sensor_mode");
  plan.target = get_str(j, "scan", "target");
  plan.noise_sigma = get_num_or(j, "scan", "noise_sigma", 0.0);
  plan.drift_rate = get_num_or(j, "scan", "drift_rate_rad", 0.0);
  plan.line_width = get_num_or(j, "scan", "line_width_MHz", plan.line_width);
  plan.line_depth = get_num_or(j, "scan", "line_depth", plan.line_depth);
  plan.background = get_num_or(j, "scan", "background", plan.background);
  plan.validate();
  return plan;
}

json plan_to_json(const synth::ScanPlan& plan) {
  json j;
  switch (plan.kind) {
    case synth::ScanKind::stark: j["kind"] = "stark"; break;
    case synth::ScanKind::stark_monitor: j["kind"] = "stark_monitor"; break;
    case synth::ScanKind::kerr: j["kind"] = "kerr"; break;
  }
  j["powers_nW"] = plan.powers;
  j["pump_grid_MHz"] = plan.pump_grid;
  j["probe_freq_MHz"] = plan.probe_freq;
  j["sensor_mode"] = plan.sensor_mode;
  j["target"] = plan.target;
  j["noise_sigma"] = plan.noise_sigma;
  j["drift_rate_rad"] = plan.drift_rate;
  j["line_width_MHz"] = plan.line_width;
  j["line_depth"] = plan.line_depth;
  j["background"] = plan.background;
  return j;
}

extract::Channel channel_from_string(const std::string& s) {
  if (s == "magnitude") return extract::Channel::magnitude;
  if (s == "phase") return extract::Channel::phase;
  throw ConfigError("stark_channel must be 'magnitude' or 'phase'");
}

extract::ExtractionOptions extraction_options_from_json(const json& j) {
  require_keys(j, "extraction",
               {"fit", "apply_filter", "filter_sigma_points", "error_mode",
                "residual_gate", "stark_channel"});
  extract::ExtractionOptions opt;
  if (j.contains("fit")) {
    std::string fit = get_str(j, "extraction", "fit");
    if (fit == "1d")
      opt.use_2d = false;
    else if (fit == "2d")
      opt.use_2d = true;
    else
      throw ConfigError("extraction: fit must be '1d' or '2d'");
  }
  if (j.contains("apply_filter")) {
    if (!j.at("apply_filter").is_boolean())
      throw ConfigError("extraction: apply_filter must be a boolean");
    opt.kerr.apply_filter = j.at("apply_filter").get<bool>();
  }
  opt.kerr.filter_sigma_points = get_num_or(
      j, "extraction", "filter_sigma_points", opt.kerr.filter_sigma_points);
  if (j.contains("error_mode")) {
    std::string m = get_str(j, "extraction", "error_mode");
    if (m == "stat")
      opt.error_mode = extract::ErrorMode::statistical;
    else if (m == "hardware")
      opt.error_mode = extract::ErrorMode::hardware;
    else
      throw ConfigError("extraction: error_mode must be 'stat' or 'hardware'");
  }
  opt.kerr.residual_gate =
      get_num_or(j, "extraction", "residual_gate", opt.kerr.residual_gate);
  return opt;
}

json extraction_options_to_json(const extract::ExtractionOptions& opt) {
  json j;
  j["fit"] = opt.use_2d ? "2d" : "1d";
  j["apply_filter"] = opt.kerr.apply_filter;
  j["filter_sigma_points"] = opt.kerr.filter_sigma_points;
  j["error_mode"] =
      opt.error_mode == extract::ErrorMode::hardware ? "hardware" : "stat";
  if (std::isfinite(opt.kerr.residual_gate))
    j["residual_gate"] = opt.kerr.residual_gate;
  return j;
}

json estimate_to_json(const extract::CouplingEstimate& est) {
  json j;
  j["g_drive_MHz"] = est.g_drive;
  j["g_drive_err_MHz"] = est.g_drive_err;
  j["g_monitor_MHz"] = est.g_monitor;
  j["g_monitor_err_MHz"] = est.g_monitor_err;
  j["slope_q_MHz_per_nW"] = est.slope_q_MHz_per_nW.value;
  j["slope_q_err_MHz_per_nW"] = est.slope_q_MHz_per_nW.stderr_;
  j["slope_d_kHz_per_nW"] = est.slope_d_kHz_per_nW.value;
  j["slope_d_err_kHz_per_nW"] = est.slope_d_kHz_per_nW.stderr_;
  j["slope_m_kHz_per_nW"] = est.slope_m_kHz_per_nW.value;
  j["slope_m_err_kHz_per_nW"] = est.slope_m_kHz_per_nW.stderr_;
  j["delta_D_MHz"] = est.delta_D;
  j["delta_M_MHz"] = est.delta_M;
  j["alpha_MHz"] = est.alpha;
  j["drive_name"] = est.drive_name;
  j["monitor_name"] = est.monitor_name;
  j["omega_q_MHz"] = est.qubit_freq;
  return j;
}

json report_to_json(const extract::ConsistencyReport& rep) {
  json j;
  j["modes"] = json::array();
  for (const auto& m : rep.modes) {
    json mj;
    mj["name"] = m.name;
    mj["count"] = m.count;
    mj["mean_MHz"] = m.mean;
    mj["min_MHz"] = m.min;
    mj["max_MHz"] = m.max;
    mj["spread_MHz"] = m.spread;
    j["modes"].push_back(std::move(mj));
  }
  if (rep.sweep) {
    json s;
    s["points"] = rep.sweep->n;
    s["trend_exponent"] = rep.sweep->trend_exponent;
    s["expected_exponent"] = rep.sweep->expected_exponent;
    s["flatness_raw"] = rep.sweep->flatness_raw;
    s["flatness_normalized"] = rep.sweep->flatness_normalized;
    j["detuning_sweep"] = std::move(s);
  }
  return j;
}

void write_traces_csv(const std::vector<synth::SpectroscopyTrace>& traces,
                      const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  std::fprintf(f, "power_nW,pump_freq_MHz,magnitude,phase_rad\n");
  for (const auto& t : traces)
    for (std::size_t i = 0; i < t.pump_freqs.size(); ++i)
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", t.power, t.pump_freqs[i],
                   t.magnitude[i], t.phase[i]);
  std::fclose(f);
}

std::vector<synth::SpectroscopyTrace> read_traces_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) ||
      line != "power_nW,pump_freq_MHz,magnitude,phase_rad")
    throw ConfigError("'" + path + "': not a trace CSV (bad header)");

  std::vector<synth::SpectroscopyTrace> traces;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[4];
    char comma = ',';
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      if (!(ss >> vals[k])) ok = false;
      if (ok && k < 3 && (!(ss >> comma) || comma != ',')) ok = false;
    }
    if (!ok)
      throw ConfigError("'" + path + "' line " + std::to_string(lineno) +
                        ": malformed row");
    if (traces.empty() || traces.back().power != vals[0]) {
      synth::SpectroscopyTrace t;
      t.power = vals[0];
      traces.push_back(std::move(t));
    }
    traces.back().pump_freqs.push_back(vals[1]);
    traces.back().magnitude.push_back(vals[2]);
    traces.back().phase.push_back(vals[3]);
  }
  if (traces.empty()) throw ConfigError("'" + path + "': no data rows");
  return traces;
}

json traces_sidecar(const synth::ScanPlan& plan, std::uint64_t seed,
                    const std::vector<synth::SpectroscopyTrace>& traces) {
  json j;
  j["plan"] = plan_to_json(plan);
  j["seed"] = seed;
  j["traces"] = json::array();
  for (const auto& t : traces) {
    json tj;
    tj["power_nW"] = t.power;
    json truth;
    if (t.truth.omega_q_eff) truth["omega_q_eff_MHz"] = *t.truth.omega_q_eff;
    if (t.truth.omega_d_eff) truth["omega_d_eff_MHz"] = *t.truth.omega_d_eff;
    if (t.truth.omega_m_eff) truth["omega_m_eff_MHz"] = *t.truth.omega_m_eff;
    if (t.truth.n_bar_peak) truth["n_bar_peak"] = *t.truth.n_bar_peak;
    tj["truth"] = std::move(truth);
    j["traces"].push_back(std::move(tj));
  }
  return j;
}

void apply_sidecar_truth(const json& sidecar,
                         std::vector<synth::SpectroscopyTrace>& traces) {
  if (!sidecar.contains("traces") || !sidecar.at("traces").is_array())
    throw ConfigError("sidecar: missing 'traces' array");
  const json& arr = sidecar.at("traces");
  if (arr.size() != traces.size())
    throw ConfigError("sidecar: trace count mismatch with CSV");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const json& tj = arr[i];
    double p = get_num(tj, "sidecar.traces[]", "power_nW");
    if (std::abs(p - traces[i].power) > 1e-9)
      throw ConfigError("sidecar: power mismatch with CSV at trace " +
                        std::to_string(i));
    if (!tj.contains("truth")) continue;
    const json& truth = tj.at("truth");
    if (truth.contains("omega_q_eff_MHz"))
      traces[i].truth.omega_q_eff = truth.at("omega_q_eff_MHz").get<double>();
    if (truth.contains("omega_d_eff_MHz"))
      traces[i].truth.omega_d_eff = truth.at("omega_d_eff_MHz").get<double>();
    if (truth.contains("omega_m_eff_MHz"))
      traces[i].truth.omega_m_eff = truth.at("omega_m_eff_MHz").get<double>();
    if (truth.contains("n_bar_peak"))
      traces[i].truth.n_bar_peak = truth.at("n_bar_peak").get<double>();
  }
}

}  // namespace cqed::io
