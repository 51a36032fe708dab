#include "cqed/synth.hpp"

#include <cmath>
#include <string>

#include "cqed/errors.hpp"
#include "cqed/kerrdyn.hpp"
#include "cqed/rng.hpp"
#include "cqed/swpt.hpp"

namespace cqed::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string("scan plan: ") + what + " is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw ConfigError(std::string("scan plan: ") + what +
                        " must be strictly increasing");
}

}  // namespace

void ScanPlan::validate() const {
  require_increasing(powers, "powers");
  require_increasing(pump_grid, "pump_grid");
  if (pump_grid.size() < 2)
    throw ConfigError("scan plan: pump_grid needs at least two points");
  if (powers.front() < 0.0)
    throw ConfigError("scan plan: powers must be nonnegative");
  if (noise_sigma < 0.0)
    throw ConfigError("scan plan: noise_sigma must be >= 0");
  if (target.empty()) throw ConfigError("scan plan: target mode not set");
  if (kind != ScanKind::stark && sensor_mode.empty())
    throw ConfigError("scan plan: sensor_mode not set");
  if (line_width <= 0.0)
    throw ConfigError("scan plan: line_width must be positive");
  if (line_depth < 0.0)
    throw ConfigError("scan plan: line_depth must be >= 0");
}

double wrap_phase(double phi) {
  double y = std::remainder(phi, 2.0 * kPi);
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}

CoefficientSet compute_coefficients(const fock::DeviceSpec& spec,
                                    const ScanPlan& plan) {
  const auto& t = spec.mode(plan.target);
  double dt = spec.omega_q - t.omega;
  CoefficientSet c;
  c.stark_per_photon = sw::chi_stark(t.g, dt, spec.alpha);
  if (plan.kind == ScanKind::kerr) {
    const auto& s = spec.mode(plan.sensor_mode);
    double ds = spec.omega_q - s.omega;
    c.self_kerr = sw::kerr_self(t.g, dt, spec.alpha);
    c.cross_kerr = sw::kerr_cross(t.g, s.g, dt, ds, spec.alpha);
  }
  return c;
}

std::vector<SpectroscopyTrace> simulate_stark_scan(
    const fock::DeviceSpec& spec, const ScanPlan& plan, std::uint64_t rng_seed,
    const CoefficientSet* coeff_override) {
  spec.validate();
  plan.validate();
  if (plan.kind == ScanKind::kerr)
    throw ConfigError("simulate_stark_scan: plan.kind is kerr");
  CoefficientSet coeff =
      coeff_override ? *coeff_override : compute_coefficients(spec, plan);

  const bool monitor_variant = plan.kind == ScanKind::stark_monitor;
  std::vector<SpectroscopyTrace> traces;
  traces.reserve(plan.powers.size());
  for (std::size_t i = 0; i < plan.powers.size(); ++i) {
    double P = plan.powers[i];
    double n_bar = spec.beta * P;
    double wq_eff = spec.omega_q + coeff.stark_per_photon * n_bar;
    if (wq_eff < plan.pump_grid.front() + plan.line_width ||
        wq_eff > plan.pump_grid.back() - plan.line_width)
      throw ConfigError("stark scan: qubit line at power " + std::to_string(P) +
                        " nW leaves the pump grid");

    NormalRng rng(NormalRng::substream(rng_seed, i));
    SpectroscopyTrace tr;
    tr.power = P;
    tr.pump_freqs = plan.pump_grid;
    tr.magnitude.reserve(plan.pump_grid.size());
    tr.phase.reserve(plan.pump_grid.size());
    for (double f : plan.pump_grid) {
      double u = (f - wq_eff) / plan.line_width;
      double line = plan.line_depth * std::exp(-0.5 * u * u);
      double mag = monitor_variant ? plan.background : plan.background - line;
      double phi = monitor_variant ? -line : 0.0;
      tr.magnitude.push_back(mag + plan.noise_sigma * rng.normal());
      tr.phase.push_back(wrap_phase(phi + plan.noise_sigma * rng.normal()));
    }
    tr.truth.omega_q_eff = wq_eff;
    tr.truth.n_bar_peak = n_bar;
    traces.push_back(std::move(tr));
  }
  return traces;
}

std::vector<SpectroscopyTrace> simulate_kerr_scan(
    const fock::DeviceSpec& spec, const ScanPlan& plan, std::uint64_t rng_seed,
    const CoefficientSet* coeff_override) {
  spec.validate();
  plan.validate();
  if (plan.kind != ScanKind::kerr)
    throw ConfigError("simulate_kerr_scan: plan.kind is not kerr");
  CoefficientSet coeff =
      coeff_override ? *coeff_override : compute_coefficients(spec, plan);

  const auto& d = spec.mode(plan.target);
  const auto& m = spec.mode(plan.sensor_mode);
  double eta = std::abs(coeff.self_kerr);
  // A positive self-Kerr pulls the resonance up instead of down; the steady
  // state is the detuning mirror of the standard (negative) branch.
  double mirror = coeff.self_kerr > 0.0 ? -1.0 : 1.0;

  if (eta > 0.0) {
    double ecrit2 = kerr::critical_drive(d.kappa, eta);
    ecrit2 *= ecrit2;
    for (double P : plan.powers)
      if (spec.zeta * P >= ecrit2)
        throw ConfigError("kerr scan: power " + std::to_string(P) +
                          " nW is at or above the bistability threshold");
  }

  std::vector<SpectroscopyTrace> traces;
  traces.reserve(plan.powers.size());
  for (std::size_t i = 0; i < plan.powers.size(); ++i) {
    double P = plan.powers[i];
    double e2 = spec.zeta * P;
    NormalRng rng(NormalRng::substream(rng_seed, i));
    SpectroscopyTrace tr;
    tr.power = P;
    tr.pump_freqs = plan.pump_grid;
    tr.magnitude.reserve(plan.pump_grid.size());
    tr.phase.reserve(plan.pump_grid.size());
    for (double f : plan.pump_grid) {
      kerr::KerrDriveParams p{mirror * (f - d.omega), d.kappa, eta, e2,
                              d.kappa};
      kerr::SteadyState st = kerr::steady_state(p);
      double n_bar = st.photon_roots[st.selected];
      double dwm = coeff.cross_kerr * n_bar;
      double phi = kerr::phase_response(plan.probe_freq, m.omega + dwm,
                                        spec.quality(m));
      tr.magnitude.push_back(std::abs(st.transmitted) +
                             plan.noise_sigma * rng.normal());
      tr.phase.push_back(wrap_phase(phi + plan.noise_sigma * rng.normal()));
    }
    double n_peak = e2 / (d.kappa * d.kappa / 4.0);
    tr.truth.n_bar_peak = n_peak;
    tr.truth.omega_d_eff = d.omega + coeff.self_kerr * n_peak;
    tr.truth.omega_m_eff = m.omega + coeff.cross_kerr * n_peak;
    traces.push_back(std::move(tr));
  }
  return traces;
}

std::vector<SpectroscopyTrace> inject_phase_drift(
    std::vector<SpectroscopyTrace> traces, double drift_rate,
    std::uint64_t rng_seed, double walk_sigma) {
  NormalRng rng(NormalRng::substream(rng_seed, 0x5eed));
  double walk = 0.0;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    walk += walk_sigma * rng.normal();
    double offset = drift_rate * static_cast<double>(k) + walk;
    for (double& phi : traces[k].phase) phi = wrap_phase(phi + offset);
  }
  return traces;
}

}  // namespace cqed::synth
