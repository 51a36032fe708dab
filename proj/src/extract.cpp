#include "cqed/extract.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cqed/errors.hpp"
#include "cqed/kerrdyn.hpp"
#include "cqed/lm.hpp"

namespace cqed::extract {

namespace {

double median(std::vector<double> v) {
  std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  double hi = v[k];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + k - 1, v.end());
  return 0.5 * (hi + v[k - 1]);
}

double pole_guarded(double x, const char* what) {
  if (std::abs(x) < 1e-9)
    throw NumericalError(std::string("extract: pole in ") + what);
  return x;
}

// n_bar/|E|^2 of the Kerr steady state at detuning `delta`, linewidth
// `kappa` and slope parameter q = eta*|E|^2; negative q mirrors the detuning.
double response_u(double delta, double kappa, double q) {
  kappa = std::max(std::abs(kappa), 1e-9);
  if (std::abs(q) < 1e-30)
    return 1.0 / (delta * delta + kappa * kappa / 4.0);
  double sgn = q > 0.0 ? 1.0 : -1.0;
  kerr::KerrDriveParams p{sgn * delta, kappa, std::abs(q), 1.0, 0.0};
  return kerr::steady_state(p).photon_roots.front();
}

struct GridStats {
  double step = 0.0;
  int ext = 0;        // index of largest |y - background|
  double bg = 0.0;    // median level
  double depth = 0.0; // y[ext] - bg, signed
  double width = 0.0; // full width at half depth, floored at 2 steps
};

GridStats grid_stats(const std::vector<double>& f,
                     const std::vector<double>& y) {
  GridStats s;
  s.step = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
  s.bg = median(y);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - s.bg) > std::abs(y[s.ext] - s.bg))
      s.ext = static_cast<int>(i);
  s.depth = y[s.ext] - s.bg;
  double half = std::abs(s.depth) / 2.0;
  int lo = s.ext, hi = s.ext;
  while (lo > 0 && std::abs(y[lo] - s.bg) > half) --lo;
  while (hi + 1 < static_cast<int>(y.size()) && std::abs(y[hi] - s.bg) > half)
    ++hi;
  s.width = std::max((hi - lo) * s.step, 2.0 * s.step);
  return s;
}

}  // namespace

std::vector<double> gaussian_smooth(const std::vector<double>& y,
                                    double sigma_points) {
  if (sigma_points <= 0.0 || y.size() < 2) return y;
  int n = static_cast<int>(y.size());
  int radius = std::min(n - 1, static_cast<int>(std::ceil(4.0 * sigma_points)));
  std::vector<double> kernel(radius + 1);
  for (int k = 0; k <= radius; ++k)
    kernel[k] = std::exp(-0.5 * k * k / (sigma_points * sigma_points));
  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      int j = i + k;
      if (j < 0 || j >= n) continue;
      double w = kernel[std::abs(k)];
      acc += w * y[j];
      norm += w;
    }
    out[i] = acc / norm;
  }
  return out;
}

LineFit fit_qubit_line(const synth::SpectroscopyTrace& trace,
                       Channel channel) {
  const std::vector<double>& f = trace.pump_freqs;
  const std::vector<double>& y =
      channel == Channel::magnitude ? trace.magnitude : trace.phase;
  if (f.size() < 10 || y.size() != f.size())
    throw ConfigError("fit_qubit_line: need at least 10 points");

  GridStats gs = grid_stats(f, y);
  double w0 = std::max(gs.width / 2.355, gs.step);  // FWHM -> sigma

  auto resid = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      double u = (f[i] - p[0]) / p[1];
      r[i] = p[3] - p[2] * std::exp(-0.5 * u * u) - y[i];
    }
    return r;
  };

  Eigen::VectorXd p0(4), scales(4);
  p0 << f[gs.ext], w0, -gs.depth, gs.bg;
  scales << std::max(w0, gs.step), w0, std::abs(gs.depth) + 1e-9,
      std::abs(gs.bg) + 0.1;
  LmResult res = lm_fit(resid, p0, scales);
  if (!res.converged)
    throw NumericalError("fit_qubit_line: fit did not converge");

  LineFit fit;
  fit.center = res.params[0];
  fit.width = std::abs(res.params[1]);
  fit.depth = res.params[2];
  fit.background = res.params[3];
  fit.covariance = 0.5 * (res.covariance + res.covariance.transpose());
  fit.residual_rms = res.residual_rms;
  if (fit.center < f.front() + fit.width || fit.center > f.back() - fit.width)
    throw NumericalError("fit_qubit_line: line center on grid boundary");
  return fit;
}

namespace {

struct Kerr1DModel {
  const std::vector<double>& f;
  const std::vector<double>& y;

  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const {
    // p = (omega_c, kappa, A, q)
    Eigen::VectorXd r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      r[i] = p[2] * response_u(f[i] - p[0], p[1], p[3]) - y[i];
    return r;
  }
};

}  // namespace

KerrFit1D fit_kerr_1d(const synth::SpectroscopyTrace& trace, double q_monitor,
                      double omega_monitor, const KerrFitOptions& opt) {
  const std::vector<double>& f = trace.pump_freqs;
  if (f.size() < 10 || trace.phase.size() != f.size())
    throw ConfigError("fit_kerr_1d: need at least 10 points");

  std::vector<double> shift(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    shift[i] = kerr::invert_phase(trace.phase[i], q_monitor, omega_monitor);
  if (opt.apply_filter)
    shift = gaussian_smooth(shift, opt.filter_sigma_points);

  GridStats gs = grid_stats(f, shift);
  double kappa0 = gs.width;
  double amp0 = gs.depth * kappa0 * kappa0 / 4.0;

  LmOptions lmopt;
  lmopt.max_iter = opt.max_iterations;
  Kerr1DModel model{f, shift};

  Eigen::VectorXd scales(4);
  scales << std::max(kappa0, gs.step), kappa0, std::abs(amp0) + 1e-12,
      kappa0 * kappa0 * kappa0 / 10.0 + 1e-12;

  LmResult best;
  best.ssr = std::numeric_limits<double>::infinity();
  auto try_start = [&](double wc, double kap) {
    Eigen::VectorXd p0(4);
    p0 << wc, kap, gs.depth * kap * kap / 4.0, 0.0;
    LmResult res = lm_fit(model, p0, scales, lmopt);
    if (res.converged && res.ssr < best.ssr) best = res;
  };
  try_start(f[gs.ext], kappa0);
  if (!best.converged || best.residual_rms > opt.residual_gate)
    for (double dw : {0.0, -2.0 * gs.step, 2.0 * gs.step})
      for (double sk : {1.0, 0.5, 2.0})
        if (dw != 0.0 || sk != 1.0) try_start(f[gs.ext] + dw, sk * kappa0);
  if (!best.converged)
    throw NumericalError("fit_kerr_1d: fit did not converge");

  double omega_c = best.params[0];
  double kappa = std::abs(best.params[1]);
  double amp = best.params[2];
  double q = best.params[3];
  if (std::abs(q) >= kappa * kappa * kappa / (3.0 * std::sqrt(3.0)))
    throw NumericalError("fit_kerr_1d: folded (bistable) response shape");

  double v = 4.0 / (kappa * kappa);
  KerrFit1D fit;
  fit.omega_c = omega_c;
  fit.kappa = kappa;
  fit.amplitude = amp;
  fit.drive_power_sq = q;
  fit.omega_d_eff = omega_c - q * v;
  fit.omega_m_shift = amp * v;
  fit.residual_rms = best.residual_rms;
  if (fit.residual_rms > opt.residual_gate)
    throw NumericalError("fit_kerr_1d: residual above the configured gate");
  if (fit.omega_d_eff <= f.front() || fit.omega_d_eff >= f.back())
    throw NumericalError("fit_kerr_1d: extremum on grid boundary");

  double k3 = kappa * kappa * kappa;
  Eigen::Vector4d gd(1.0, 8.0 * q / k3, 0.0, -v);
  Eigen::Vector4d gm(0.0, -8.0 * amp / k3, v, 0.0);
  fit.omega_d_err = std::sqrt(std::max(0.0, gd.dot(best.covariance * gd)));
  fit.omega_m_shift_err = std::sqrt(std::max(0.0, gm.dot(best.covariance * gm)));
  return fit;
}

KerrFit2D fit_kerr_2d(const std::vector<synth::SpectroscopyTrace>& traces,
                      double q_monitor, double omega_monitor,
                      const KerrFitOptions& opt) {
  if (traces.size() < 3)
    throw ConfigError("fit_kerr_2d: need at least 3 powers (rank deficiency)");
  const std::vector<double>& f = traces.front().pump_freqs;
  for (const auto& t : traces) {
    if (t.pump_freqs.size() != f.size())
      throw ConfigError("fit_kerr_2d: traces must share the pump grid");
    for (std::size_t i = 0; i < f.size(); ++i)
      if (std::abs(t.pump_freqs[i] - f[i]) > 1e-9)
        throw ConfigError("fit_kerr_2d: traces must share the pump grid");
  }
  const std::size_t K = traces.size();
  const std::size_t n = f.size();

  std::vector<std::vector<double>> phases(K);
  for (std::size_t k = 0; k < K; ++k)
    phases[k] = opt.apply_filter
                    ? gaussian_smooth(traces[k].phase, opt.filter_sigma_points)
                    : traces[k].phase;

  // per-power 1D fits seed the shared parameters
  std::vector<double> pw, wext, shifts, kappas;
  for (const auto& t : traces) {
    try {
      KerrFit1D f1 = fit_kerr_1d(t, q_monitor, omega_monitor, opt);
      pw.push_back(t.power);
      wext.push_back(f1.omega_d_eff);
      shifts.push_back(f1.omega_m_shift);
      kappas.push_back(f1.kappa);
    } catch (const std::exception&) {
    }
  }
  double step = (f.back() - f.front()) / static_cast<double>(n - 1);
  double kappa0 = kappas.empty() ? 10.0 * step : median(kappas);
  double v0 = 4.0 / (kappa0 * kappa0);
  double omega_d0 = 0.5 * (f.front() + f.back());
  double a0 = 0.0, b0 = 0.0;
  if (pw.size() >= 2) {
    double xb = 0.0, eb = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      xb += pw[i];
      eb += wext[i];
      sb += shifts[i];
    }
    double m = static_cast<double>(pw.size());
    xb /= m;
    eb /= m;
    sb /= m;
    double sxx = 0.0, sxe = 0.0, sxs = 0.0;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      sxx += (pw[i] - xb) * (pw[i] - xb);
      sxe += (pw[i] - xb) * (wext[i] - eb);
      sxs += (pw[i] - xb) * (shifts[i] - sb);
    }
    if (sxx > 0.0) {
      omega_d0 = eb - sxe / sxx * xb;
      b0 = -(sxe / sxx) / v0;
      a0 = (sxs / sxx) / v0;
    }
  }

  auto resid = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(K * n);
    for (std::size_t k = 0; k < K; ++k) {
      double P = traces[k].power;
      double qk = p[3] * P;
      for (std::size_t i = 0; i < n; ++i) {
        double u = response_u(f[i] - p[0], p[1], qk);
        double dwm = p[2] * P * u;
        double model = kerr::phase_response(omega_monitor,
                                            omega_monitor + dwm, q_monitor) +
                       p[4 + k];
        r[k * n + i] = model - phases[k][i];
      }
    }
    return r;
  };

  Eigen::VectorXd p0(4 + K), scales(4 + K);
  p0 << omega_d0, kappa0, a0, b0, Eigen::VectorXd::Zero(K);
  double pmax = traces.back().power;
  scales << std::max(kappa0, step), kappa0, std::abs(a0) + 1e-12,
      std::abs(b0) + kappa0 * kappa0 * kappa0 / (10.0 * std::max(pmax, 1e-9)),
      Eigen::VectorXd::Constant(K, 0.05);

  LmOptions lmopt;
  lmopt.max_iter = std::max(opt.max_iterations, 200);
  LmResult res = lm_fit(resid, p0, scales, lmopt);
  if (!res.converged)
    throw NumericalError("fit_kerr_2d: fit did not converge");

  KerrFit2D fit;
  fit.omega_d = res.params[0];
  fit.kappa = std::abs(res.params[1]);
  fit.a = res.params[2];
  fit.b = res.params[3];
  fit.zeta = std::abs(fit.a);
  fit.eta = fit.zeta > 0.0 ? fit.b / fit.zeta : 0.0;
  fit.phase_offsets.assign(res.params.data() + 4, res.params.data() + 4 + K);
  fit.residual_rms = res.residual_rms;
  fit.covariance = 0.5 * (res.covariance + res.covariance.transpose());
  if (fit.residual_rms > opt.residual_gate)
    throw NumericalError("fit_kerr_2d: residual above the configured gate");
  return fit;
}

LinearFitResult fit_slope(const std::vector<SlopePoint>& points) {
  if (points.size() < 3) throw ConfigError("fit_slope: need at least 3 points");
  const std::size_t n = points.size();
  bool weighted = std::all_of(points.begin(), points.end(),
                              [](const SlopePoint& p) { return p.sigma > 0.0; });

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
    sw += w;
    sx += w * p.x;
    sy += w * p.y;
  }
  double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
    sxx += w * (p.x - xbar) * (p.x - xbar);
    sxy += w * (p.x - xbar) * (p.y - ybar);
  }
  double xscale = std::max(std::abs(points.front().x), std::abs(points.back().x));
  if (sxx <= 1e-24 * sw * std::max(xscale * xscale, 1e-300))
    throw ConfigError("fit_slope: degenerate abscissa");

  LinearFitResult r;
  r.slope = sxy / sxx;
  r.intercept = ybar - r.slope * xbar;
  if (weighted) {
    r.slope_stderr = std::sqrt(1.0 / sxx);
    r.intercept_stderr = std::sqrt(1.0 / sw + xbar * xbar / sxx);
  } else {
    double ssr = 0.0;
    for (const auto& p : points) {
      double e = p.y - (r.intercept + r.slope * p.x);
      ssr += e * e;
    }
    double s2 = ssr / static_cast<double>(n - 2);
    r.slope_stderr = std::sqrt(s2 / sxx);
    r.intercept_stderr = std::sqrt(s2 * (1.0 / sw + xbar * xbar / sxx));
  }
  return r;
}

CouplingEstimate extract_couplings(double slope_q, double slope_q_err,
                                   double slope_d, double slope_d_err,
                                   double slope_m, double slope_m_err,
                                   double delta_D, double delta_M, double alpha,
                                   ErrorMode mode) {
  if (std::abs(slope_q) < 1e-30)
    throw NumericalError("extract_couplings: qubit slope vanishes");
  double a_d = pole_guarded(alpha - delta_D, "alpha - Delta_D");
  double a_2d = pole_guarded(alpha - 2.0 * delta_D, "alpha - 2 Delta_D");
  double d_sum = pole_guarded(delta_D + delta_M, "Delta_D + Delta_M");
  double a_dm = pole_guarded(alpha - delta_D - delta_M,
                             "alpha - Delta_D - Delta_M");
  pole_guarded(delta_D, "Delta_D");

  double r_d = slope_d / slope_q;
  double r_m = slope_m / slope_q;
  // predicted ratio signs: chi_DD/chi_stark_D and chi_DM/chi_stark_D
  double sign_d = a_d / a_2d;
  double sign_m = d_sum * a_d / (delta_D * a_dm);
  if (r_d != 0.0 && r_d * sign_d < 0.0)
    throw ConsistencyError(
        "extract_couplings: drive/qubit slope ratio sign contradicts the "
        "dispersive model");
  if (r_m != 0.0 && r_m * sign_m < 0.0)
    throw ConsistencyError(
        "extract_couplings: monitor/qubit slope ratio sign contradicts the "
        "dispersive model");

  double K_D = std::abs(delta_D * delta_D * a_2d / a_d);
  double K_M = std::abs(delta_D * delta_M * delta_M * a_dm / (d_sum * a_d));
  double g_d = std::sqrt(std::abs(r_d) * K_D);
  double g_m = std::sqrt(std::abs(r_m) * K_M);

  auto propagate = [&](double g, double K, double slope, double err) {
    double var_g2 = K * K *
                    (err * err + (slope / slope_q) * (slope / slope_q) *
                                     slope_q_err * slope_q_err) /
                    (slope_q * slope_q);
    double sig_g2 = std::sqrt(var_g2);
    return g > std::sqrt(sig_g2) ? sig_g2 / (2.0 * g) : std::sqrt(sig_g2);
  };
  double g_d_err = propagate(g_d, K_D, slope_d, slope_d_err);
  double g_m_err = propagate(g_m, K_M, slope_m, slope_m_err);
  if (mode == ErrorMode::hardware) {
    g_d_err = std::hypot(g_d_err, kDriveFloorMHz);
    g_m_err = std::hypot(g_m_err, kMonitorFloorMHz);
  }

  CouplingEstimate est;
  est.g_drive = g_d;
  est.g_drive_err = g_d_err;
  est.g_monitor = g_m;
  est.g_monitor_err = g_m_err;
  est.slope_q_MHz_per_nW = {slope_q, slope_q_err};
  est.slope_d_kHz_per_nW = {1e3 * slope_d, 1e3 * slope_d_err};
  est.slope_m_kHz_per_nW = {1e3 * slope_m, 1e3 * slope_m_err};
  est.delta_D = delta_D;
  est.delta_M = delta_M;
  est.alpha = alpha;
  return est;
}

ConsistencyReport consistency_report(
    const std::vector<CouplingEstimate>& estimates) {
  if (estimates.empty())
    throw ConfigError("consistency_report: no estimates given");

  std::map<std::string, std::vector<double>> per_mode;
  for (const auto& e : estimates) {
    if (!e.drive_name.empty()) per_mode[e.drive_name].push_back(e.g_drive);
    if (!e.monitor_name.empty())
      per_mode[e.monitor_name].push_back(e.g_monitor);
  }

  ConsistencyReport rep;
  for (const auto& [name, vals] : per_mode) {
    ModeStat s;
    s.name = name;
    s.count = static_cast<int>(vals.size());
    s.min = *std::min_element(vals.begin(), vals.end());
    s.max = *std::max_element(vals.begin(), vals.end());
    s.mean = 0.0;
    for (double v : vals) s.mean += v;
    s.mean /= static_cast<double>(vals.size());
    s.spread = s.max - s.min;
    rep.modes.push_back(std::move(s));
  }

  bool same_pair = true;
  for (const auto& e : estimates)
    same_pair = same_pair && e.drive_name == estimates.front().drive_name &&
                e.monitor_name == estimates.front().monitor_name;
  std::vector<const CouplingEstimate*> sweep;
  for (const auto& e : estimates)
    if (e.qubit_freq > 0.0 && e.g_drive > 0.0) sweep.push_back(&e);
  double wq_min = 0.0, wq_max = 0.0;
  if (!sweep.empty()) {
    auto [lo, hi] = std::minmax_element(
        sweep.begin(), sweep.end(), [](const auto* a, const auto* b) {
          return a->qubit_freq < b->qubit_freq;
        });
    wq_min = (*lo)->qubit_freq;
    wq_max = (*hi)->qubit_freq;
  }
  if (same_pair && sweep.size() >= 3 && wq_max - wq_min > 1e-6) {
    std::vector<SlopePoint> pts;
    double gmin = sweep.front()->g_drive, gmax = gmin, gsum = 0.0;
    double hmin = 0.0, hmax = 0.0, hsum = 0.0;
    bool first = true;
    for (const auto* e : sweep) {
      pts.push_back({std::log(e->qubit_freq), std::log(e->g_drive), 0.0});
      double h = e->g_drive / std::sqrt(e->qubit_freq);
      gmin = std::min(gmin, e->g_drive);
      gmax = std::max(gmax, e->g_drive);
      gsum += e->g_drive;
      if (first) {
        hmin = hmax = h;
        first = false;
      }
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
      hsum += h;
    }
    SweepStat st;
    st.n = static_cast<int>(sweep.size());
    st.trend_exponent = fit_slope(pts).slope;
    st.flatness_raw = (gmax - gmin) / (gsum / st.n);
    st.flatness_normalized = (hmax - hmin) / (hsum / st.n);
    rep.sweep = st;
  }
  return rep;
}

ExtractionResult run_extraction(
    const ExtractionGeometry& geom,
    const std::vector<synth::SpectroscopyTrace>& stark_traces,
    const std::vector<synth::SpectroscopyTrace>& kerr_traces,
    const ExtractionOptions& opt) {
  if (stark_traces.empty() || kerr_traces.empty())
    throw ConfigError("run_extraction: need stark and kerr traces");

  ExtractionResult out;
  for (const auto& t : stark_traces) {
    LineFit lf = fit_qubit_line(t, geom.stark_channel);
    out.stark_powers.push_back(t.power);
    out.qubit_centers.push_back(lf.center);
    out.qubit_center_err.push_back(std::sqrt(std::max(0.0, lf.covariance(0, 0))));
  }

  if (opt.use_2d) {
    KerrFit2D f2 =
        fit_kerr_2d(kerr_traces, geom.q_monitor, geom.omega_m, opt.kerr);
    double v = 4.0 / (f2.kappa * f2.kappa);
    for (const auto& t : kerr_traces) {
      out.kerr_powers.push_back(t.power);
      out.drive_centers.push_back(f2.omega_d - f2.b * t.power * v);
      out.drive_center_err.push_back(0.0);
      out.monitor_shifts.push_back(f2.a * t.power * v);
      out.monitor_shift_err.push_back(0.0);
    }
    double k3 = f2.kappa * f2.kappa * f2.kappa;
    Eigen::VectorXd gd = Eigen::VectorXd::Zero(f2.covariance.rows());
    gd[1] = 8.0 * f2.b / k3;
    gd[3] = -v;
    Eigen::VectorXd gm = Eigen::VectorXd::Zero(f2.covariance.rows());
    gm[1] = -8.0 * f2.a / k3;
    gm[2] = v;
    out.line_d.slope = -f2.b * v;
    out.line_d.slope_stderr =
        std::sqrt(std::max(0.0, gd.dot(f2.covariance * gd)));
    out.line_d.intercept = f2.omega_d;
    out.line_m.slope = f2.a * v;
    out.line_m.slope_stderr =
        std::sqrt(std::max(0.0, gm.dot(f2.covariance * gm)));
    out.line_m.intercept = 0.0;
    out.fit2d = std::move(f2);
  } else {
    // per-power fits: an unusable trace (fold shape, stuck fit) is dropped,
    // not fatal, as long as three powers survive for the slope
    std::vector<SlopePoint> pd, pm;
    std::string last_err;
    for (const auto& t : kerr_traces) {
      KerrFit1D f1;
      try {
        f1 = fit_kerr_1d(t, geom.q_monitor, geom.omega_m, opt.kerr);
      } catch (const NumericalError& e) {
        out.kerr_skipped.push_back(t.power);
        last_err = e.what();
        continue;
      }
      out.kerr_powers.push_back(t.power);
      out.drive_centers.push_back(f1.omega_d_eff);
      out.drive_center_err.push_back(f1.omega_d_err);
      out.monitor_shifts.push_back(f1.omega_m_shift);
      out.monitor_shift_err.push_back(f1.omega_m_shift_err);
      pd.push_back({t.power, f1.omega_d_eff, f1.omega_d_err});
      pm.push_back({t.power, f1.omega_m_shift, f1.omega_m_shift_err});
    }
    if (pd.size() < 3)
      throw NumericalError(
          "run_extraction: fewer than 3 usable Kerr powers (last failure: " +
          last_err + ")");
    out.line_d = fit_slope(pd);
    out.line_m = fit_slope(pm);
  }

  std::vector<SlopePoint> pq;
  for (std::size_t i = 0; i < out.stark_powers.size(); ++i)
    pq.push_back(
        {out.stark_powers[i], out.qubit_centers[i], out.qubit_center_err[i]});
  out.line_q = fit_slope(pq);

  out.estimate = extract_couplings(
      out.line_q.slope, out.line_q.slope_stderr, out.line_d.slope,
      out.line_d.slope_stderr, out.line_m.slope, out.line_m.slope_stderr,
      geom.omega_q - geom.omega_d, geom.omega_q - geom.omega_m, geom.alpha,
      opt.error_mode);
  out.estimate.drive_name = geom.drive_name;
  out.estimate.monitor_name = geom.monitor_name;
  out.estimate.qubit_freq = geom.omega_q;
  return out;
}

}  // namespace cqed::extract
