#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cqed/synth.hpp"

namespace cqed::extract {

// Channel of a SpectroscopyTrace a line fit reads.
enum class Channel { magnitude, phase };

enum class ErrorMode { statistical, hardware };

// Systematic floors added in quadrature under ErrorMode::hardware, MHz.
inline constexpr double kDriveFloorMHz = 0.6;
inline constexpr double kMonitorFloorMHz = 0.5;

struct LineFit {
  double center = 0.0;  // MHz
  double width = 0.0;   // Gaussian sigma, MHz
  double depth = 0.0;   // response units, positive for a dip
  double background = 0.0;
  Eigen::Matrix4d covariance;  // order (center, width, depth, background)
  double residual_rms = 0.0;
};

struct KerrFit1D {
  double omega_d_eff = 0.0;    // extremum location, MHz
  double omega_d_err = 0.0;
  double omega_m_shift = 0.0;  // sensor shift at the extremum, MHz
  double omega_m_shift_err = 0.0;
  double drive_power_sq = 0.0;  // eta*|E|^2 in MHz^2 under eta == 1 MHz/photon
  double kappa = 0.0;           // MHz
  double omega_c = 0.0;         // bare-center fit parameter, MHz
  double amplitude = 0.0;       // cross-Kerr * |E|^2, MHz^3
  double residual_rms = 0.0;    // in shift units, MHz
};

struct KerrFit2D {
  double omega_d = 0.0;  // MHz
  double kappa = 0.0;    // MHz
  double eta = 0.0;      // MHz/photon, sign as fitted, |cross-Kerr| == 1 gauge
  double zeta = 0.0;     // MHz^2/nW in the same gauge
  std::vector<double> phase_offsets;  // radians, one per power
  double residual_rms = 0.0;          // radians
  double a = 0.0, b = 0.0;            // raw products: a = chi*zeta, b = eta*zeta
  Eigen::MatrixXd covariance;         // order (omega_d, kappa, a, b, phi_0..)
};

struct KerrFitOptions {
  bool apply_filter = true;
  double filter_sigma_points = 3.0;
  double residual_gate = std::numeric_limits<double>::infinity();
  int max_iterations = 120;
};

struct SlopePoint {
  double x = 0.0;
  double y = 0.0;
  double sigma = 0.0;  // <= 0 anywhere switches the fit to unweighted
};

struct LinearFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

struct SlopeWithError {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct CouplingEstimate {
  double g_drive = 0.0;  // MHz
  double g_drive_err = 0.0;
  double g_monitor = 0.0;  // MHz
  double g_monitor_err = 0.0;
  SlopeWithError slope_q_MHz_per_nW;
  SlopeWithError slope_d_kHz_per_nW;
  SlopeWithError slope_m_kHz_per_nW;
  double delta_D = 0.0, delta_M = 0.0, alpha = 0.0;  // MHz
  std::string drive_name, monitor_name;
  double qubit_freq = 0.0;  // MHz
};

std::vector<double> gaussian_smooth(const std::vector<double>& y,
                                    double sigma_points);

LineFit fit_qubit_line(const synth::SpectroscopyTrace& trace,
                       Channel channel = Channel::magnitude);

KerrFit1D fit_kerr_1d(const synth::SpectroscopyTrace& trace, double q_monitor,
                      double omega_monitor,
                      const KerrFitOptions& opt = KerrFitOptions{});

KerrFit2D fit_kerr_2d(const std::vector<synth::SpectroscopyTrace>& traces,
                      double q_monitor, double omega_monitor,
                      const KerrFitOptions& opt = KerrFitOptions{});

LinearFitResult fit_slope(const std::vector<SlopePoint>& points);

CouplingEstimate extract_couplings(double slope_q, double slope_q_err,
                                   double slope_d, double slope_d_err,
                                   double slope_m, double slope_m_err,
                                   double delta_D, double delta_M, double alpha,
                                   ErrorMode mode = ErrorMode::statistical);

struct ModeStat {
  std::string name;
  int count = 0;
  double mean = 0.0, min = 0.0, max = 0.0, spread = 0.0;
};

struct SweepStat {
  int n = 0;
  double trend_exponent = 0.0;  // fitted d ln g / d ln omega_q
  double expected_exponent = 0.5;
  double flatness_raw = 0.0;         // (max-min)/mean of g_drive
  double flatness_normalized = 0.0;  // same after dividing out sqrt(omega_q)
};

struct ConsistencyReport {
  std::vector<ModeStat> modes;
  std::optional<SweepStat> sweep;
};

ConsistencyReport consistency_report(
    const std::vector<CouplingEstimate>& estimates);

// End-to-end: line fits + Kerr fits + slopes + ratio formulas on one
// stark/kerr trace pair sharing a drive mode.
struct ExtractionGeometry {
  double omega_q = 0.0;
  double alpha = 0.0;
  std::string drive_name;
  double omega_d = 0.0;
  std::string monitor_name;
  double omega_m = 0.0;
  double q_monitor = 0.0;
  Channel stark_channel = Channel::magnitude;
};

struct ExtractionOptions {
  bool use_2d = false;
  KerrFitOptions kerr;
  ErrorMode error_mode = ErrorMode::statistical;
};

struct ExtractionResult {
  std::vector<double> stark_powers, qubit_centers, qubit_center_err;
  std::vector<double> kerr_powers, drive_centers, drive_center_err;
  std::vector<double> monitor_shifts, monitor_shift_err;
  std::vector<double> kerr_skipped;  // powers whose 1D fit was rejected
  LinearFitResult line_q, line_d, line_m;
  CouplingEstimate estimate;
  std::optional<KerrFit2D> fit2d;
};

ExtractionResult run_extraction(
    const ExtractionGeometry& geom,
    const std::vector<synth::SpectroscopyTrace>& stark_traces,
    const std::vector<synth::SpectroscopyTrace>& kerr_traces,
    const ExtractionOptions& opt = ExtractionOptions{});

}  // namespace cqed::extract
