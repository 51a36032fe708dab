#include "cqed/kerrdyn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cqed/errors.hpp"

namespace cqed::kerr {

void KerrDriveParams::validate() const {
  if (kappa <= 0.0) throw ConfigError("kerr: kappa must be positive");
  if (eta < 0.0) throw ConfigError("kerr: eta must be >= 0");
  if (drive_power_sq < 0.0) throw ConfigError("kerr: |E|^2 must be >= 0");
  if (kappa_out < 0.0 || kappa_out > kappa)
    throw ConfigError("kerr: kappa_out must lie in [0, kappa]");
}

namespace {

// The steady-state condition is solved in x = eta*n, where the cubic
//   x^3 + 2*delta*x^2 + (delta^2 + kappa^2/4)*x - eta*|E|^2 = 0
// keeps every coefficient at the scale of (MHz)^k regardless of how small
// eta is; roots are then polished on the same form.
struct Cubic {
  double b, c, d;  // monic: x^3 + b x^2 + c x + d

  double eval(double x) const { return ((x + b) * x + c) * x + d; }
  double deriv(double x) const { return (3.0 * x + 2.0 * b) * x + c; }
  double scale_at(double x) const {
    double ax = std::abs(x);
    return ((ax + std::abs(b)) * ax + std::abs(c)) * ax + std::abs(d);
  }

  double polish(double x) const {
    for (int it = 0; it < 4; ++it) {
      double f = eval(x);
      double df = deriv(x);
      if (df == 0.0) break;
      double step = f / df;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(std::abs(x), 1.0)) break;
    }
    return x;
  }

  std::vector<double> real_roots() const {
    // depressed form t^3 + p t + q with x = t - b/3
    double p = c - b * b / 3.0;
    double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    double shift = -b / 3.0;
    double disc = -4.0 * p * p * p - 27.0 * q * q;
    std::vector<double> roots;
    if (disc > 0.0) {
      double m = 2.0 * std::sqrt(-p / 3.0);
      double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(polish(shift + m * std::cos(theta - 2.0943951023931953 * k)));
    } else {
      double s = std::sqrt(std::max(q * q / 4.0 + p * p * p / 27.0, 0.0));
      double u = q >= 0.0 ? std::cbrt(-q / 2.0 - s) : std::cbrt(-q / 2.0 + s);
      double t = u == 0.0 ? 0.0 : u - p / (3.0 * u);
      roots.push_back(polish(shift + t));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
};

Cubic steady_cubic(const KerrDriveParams& p) {
  return Cubic{2.0 * p.delta_dr,
               p.delta_dr * p.delta_dr + p.kappa * p.kappa / 4.0,
               -p.eta * p.drive_power_sq};
}

std::complex<double> transmitted_field(const KerrDriveParams& p, double n) {
  std::complex<double> denom(p.kappa / 2.0, p.delta_dr + p.eta * n);
  std::complex<double> num(0.0, std::sqrt(p.kappa_out) *
                                    std::sqrt(p.drive_power_sq));
  return num / denom;
}

SteadyState solve_roots(const KerrDriveParams& p) {
  p.validate();
  SteadyState st;
  if (p.eta == 0.0) {
    double denom = p.delta_dr * p.delta_dr + p.kappa * p.kappa / 4.0;
    st.photon_roots = {p.drive_power_sq / denom};
    return st;
  }
  Cubic cub = steady_cubic(p);
  double top = 0.0;
  for (double x : cub.real_roots()) {
    if (x < 0.0) continue;
    double res = std::abs(cub.eval(x));
    double scale = std::max(cub.scale_at(x), 1e-300);
    if (res > 1e-10 * scale)
      throw NumericalError("kerr: cubic root residual above tolerance");
    double n = x / p.eta;
    if (st.photon_roots.empty() ||
        n > top + 1e-9 * std::max(std::abs(n), 1.0)) {
      st.photon_roots.push_back(n);
      top = n;
    }
  }
  if (st.photon_roots.empty())
    throw NumericalError("kerr: no nonnegative steady-state root (internal bug)");
  st.bistable = st.photon_roots.size() == 3;
  return st;
}

}  // namespace

SteadyState steady_state(const KerrDriveParams& p) {
  SteadyState st = solve_roots(p);
  st.selected = 0;
  st.transmitted = transmitted_field(p, st.photon_roots[st.selected]);
  return st;
}

SteadyState steady_state_continued(const KerrDriveParams& p, double prev_n) {
  SteadyState st = solve_roots(p);
  int best = 0;
  for (std::size_t k = 1; k < st.photon_roots.size(); ++k)
    if (std::abs(st.photon_roots[k] - prev_n) <
        std::abs(st.photon_roots[best] - prev_n))
      best = static_cast<int>(k);
  st.selected = best;
  st.transmitted = transmitted_field(p, st.photon_roots[st.selected]);
  return st;
}

double cubic_discriminant(const KerrDriveParams& p) {
  p.validate();
  Cubic cub = steady_cubic(p);
  double a = 1.0, b = cub.b, c = cub.c, d = cub.d;
  return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
         4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

double critical_drive(double kappa, double eta) {
  if (kappa <= 0.0) throw ConfigError("kerr: kappa must be positive");
  if (eta <= 0.0)
    throw NumericalError("kerr: eta = 0 has an infinite bistability threshold");
  return std::sqrt(kappa * kappa * kappa / (std::pow(3.0, 1.5) * eta));
}

double fold_threshold_drive_sq(double kappa, double eta) {
  if (kappa <= 0.0) throw ConfigError("kerr: kappa must be positive");
  if (eta <= 0.0)
    throw NumericalError("kerr: eta = 0 has an infinite bistability threshold");
  // Double roots live at x >= kappa/2 with detuning
  // delta = -2x +- sqrt(x^2 - kappa^2/4); the drive needed there is
  // eta |E|^2 = x [(delta + x)^2 + kappa^2/4]. The near branch (+) is the
  // cheaper one; minimize over x.
  auto drive = [&](double x) {
    double root = std::sqrt(std::max(x * x - kappa * kappa / 4.0, 0.0));
    double dx = -x + root;  // delta + x on the near branch
    return x * (dx * dx + kappa * kappa / 4.0);
  };
  double lo = kappa / 2.0, hi = 4.0 * kappa;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = drive(x1), f2 = drive(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * kappa; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = drive(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = drive(x2);
    }
  }
  return drive(0.5 * (a + b)) / eta;
}

double phase_response(double omega_probe, double omega_sensor_eff, double Q) {
  if (omega_sensor_eff <= 0.0)
    throw ConfigError("phase_response: sensor frequency must be positive");
  if (Q <= 0.0) throw ConfigError("phase_response: Q must be positive");
  return std::atan(2.0 * Q * (omega_sensor_eff - omega_probe) /
                   omega_sensor_eff);
}

double invert_phase(double phi, double Q, double omega_sensor_bare) {
  if (Q <= 0.0) throw ConfigError("invert_phase: Q must be positive");
  if (omega_sensor_bare <= 0.0)
    throw ConfigError("invert_phase: sensor frequency must be positive");
  if (!(std::abs(phi) < 1.5707963267948966))
    throw NumericalError("invert_phase: |phase| must be below pi/2");
  return omega_sensor_bare / (2.0 * Q) * std::tan(phi);
}

std::vector<ResponsePoint> response_curve(double kappa, double eta,
                                          double drive_power_sq,
                                          double kappa_out,
                                          const std::vector<double>& deltas) {
  std::vector<ResponsePoint> out;
  out.reserve(deltas.size());
  for (double d : deltas) {
    KerrDriveParams p{d, kappa, eta, drive_power_sq, kappa_out};
    SteadyState st = steady_state(p);
    ResponsePoint r;
    r.delta_dr = d;
    r.n_bar = st.photon_roots[st.selected];
    r.out = st.transmitted;
    r.phase = std::arg(st.transmitted);
    out.push_back(r);
  }
  return out;
}

void write_response_csv(const std::vector<ResponsePoint>& curve,
                        const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  std::fprintf(f, "delta_dr_MHz,n_bar,re_out,im_out,phase_rad\n");
  for (const auto& r : curve)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.delta_dr, r.n_bar,
                 r.out.real(), r.out.imag(), r.phase);
  std::fclose(f);
}

}  // namespace cqed::kerr
