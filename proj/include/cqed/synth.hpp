#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed::synth {

// Two-tone scan variants. `stark` sweeps a probe across the qubit line while
// the target mode is driven (signal in the magnitude channel); `stark_monitor`
// is the dedicated-drive variant with the line appearing in the monitor phase
// channel; `kerr` sweeps the drive across the target mode and senses the
// cross-Kerr pull of the sensor mode.
enum class ScanKind { stark, stark_monitor, kerr };

struct ScanPlan {
  ScanKind kind = ScanKind::stark;
  std::vector<double> powers;     // nW, strictly increasing
  std::vector<double> pump_grid;  // MHz, strictly increasing
  double probe_freq = 0.0;        // MHz, sensor probe tone (kerr / stark_monitor)
  std::string sensor_mode;
  std::string target;
  double noise_sigma = 0.0;  // additive Gaussian, response units
  double drift_rate = 0.0;   // radians per trace

  // qubit line shape (the physical shape is a modeling choice)
  double line_width = 2.0;  // Gaussian sigma, MHz
  double line_depth = 0.5;  // dip depth (radians for stark_monitor)
  double background = 1.0;

  void validate() const;
};

struct TraceTruth {
  std::optional<double> omega_q_eff;
  std::optional<double> omega_d_eff;
  std::optional<double> omega_m_eff;
  std::optional<double> n_bar_peak;
};

struct SpectroscopyTrace {
  double power = 0.0;  // nW
  std::vector<double> pump_freqs;
  std::vector<double> magnitude;
  std::vector<double> phase;  // wrapped to (-pi, pi]
  TraceTruth truth;
};

// Dispersive coefficients the generator runs on. Normally derived from the
// device spec via the closed forms; tests can pass an explicit set to probe
// limits the physical formulas never reach (e.g. exactly zero self-Kerr).
struct CoefficientSet {
  double stark_per_photon = 0.0;  // qubit shift per target-mode photon, MHz
  double self_kerr = 0.0;         // target-mode self-Kerr, MHz/photon
  double cross_kerr = 0.0;        // target->sensor cross-Kerr, MHz/photon
};

CoefficientSet compute_coefficients(const fock::DeviceSpec& spec,
                                    const ScanPlan& plan);

double wrap_phase(double phi);

std::vector<SpectroscopyTrace> simulate_stark_scan(
    const fock::DeviceSpec& spec, const ScanPlan& plan, std::uint64_t rng_seed,
    const CoefficientSet* coeff_override = nullptr);

std::vector<SpectroscopyTrace> simulate_kerr_scan(
    const fock::DeviceSpec& spec, const ScanPlan& plan, std::uint64_t rng_seed,
    const CoefficientSet* coeff_override = nullptr);

std::vector<SpectroscopyTrace> inject_phase_drift(
    std::vector<SpectroscopyTrace> traces, double drift_rate,
    std::uint64_t rng_seed, double walk_sigma = 0.0);

}  // namespace cqed::synth
