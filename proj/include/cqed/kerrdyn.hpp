#pragma once
#include <complex>
#include <string>
#include <vector>

// Semiclassical steady state of the driven-damped Kerr resonator: the cubic
// photon-number equation, bistability threshold, transmitted field, and the
// sensor phase response with its inversion. Frequencies are omega/2pi in MHz.

namespace cqed::kerr {

struct KerrDriveParams {
  double delta_dr = 0.0;        // drive detuning from the bare mode, MHz
  double kappa = 0.0;           // total linewidth, MHz
  double eta = 0.0;             // self-Kerr magnitude, MHz/photon (>= 0,
                                // down-shifting convention)
  double drive_power_sq = 0.0;  // |E_dr|^2, MHz^2
  double kappa_out = 0.0;       // output coupling, MHz (<= kappa)

  void validate() const;
};

struct SteadyState {
  std::vector<double> photon_roots;  // positive real roots, ascending
  int selected = 0;
  std::complex<double> transmitted{0.0, 0.0};
  bool bistable = false;
};

// All positive real roots of
//   [(n + delta/eta)^2 + (kappa/2 eta)^2] n = |E|^2 / eta^2,
// low branch selected; transmitted amplitude from input-output theory.
SteadyState steady_state(const KerrDriveParams& p);

// sweep mode: select the root closest to the previous point's photon number
SteadyState steady_state_continued(const KerrDriveParams& p, double prev_n);

// discriminant of the steady-state cubic in n (positive inside the
// three-real-root window)
double cubic_discriminant(const KerrDriveParams& p);

// |E_crit| = sqrt(kappa^3 / (3^{3/2} eta))
double critical_drive(double kappa, double eta);

// Numeric bistability threshold |E|^2: minimum drive power on the
// double-root manifold (cubic and its derivative both zero), located by
// golden-section search over the fold parametrization. Independent of the
// closed form above; agreement validates it.
double fold_threshold_drive_sq(double kappa, double eta);

// phi = arctan(2 Q (omega_s' - omega_pr) / omega_s')
double phase_response(double omega_probe, double omega_sensor_eff, double Q);

// delta_omega_s = (omega_s / 2Q) tan(phi), bare-frequency denominator
double invert_phase(double phi, double Q, double omega_sensor_bare);

struct ResponsePoint {
  double delta_dr = 0.0;
  double n_bar = 0.0;
  std::complex<double> out{0.0, 0.0};
  double phase = 0.0;
};

std::vector<ResponsePoint> response_curve(double kappa, double eta,
                                          double drive_power_sq,
                                          double kappa_out,
                                          const std::vector<double>& deltas);

void write_response_csv(const std::vector<ResponsePoint>& curve,
                        const std::string& path);

}  // namespace cqed::kerr
