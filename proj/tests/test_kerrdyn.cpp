#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/kerrdyn.hpp"
#include "doctest.h"

using namespace cqed;
using namespace cqed::kerr;

namespace {

constexpr double kKappa = 0.1;
constexpr double kEta = 2.64e-4;

double cubic_residual(const KerrDriveParams& p, double n) {
  double d = p.delta_dr + p.eta * n;  // down-shifting convention
  return ((d * d + p.kappa * p.kappa / 4.0) * n -
          p.drive_power_sq);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("parameter validation") {
  KerrDriveParams p{0.0, kKappa, kEta, 1.0, kKappa};
  CHECK_NOTHROW(p.validate());

  p.kappa = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.kappa = kKappa;
  p.eta = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.eta = kEta;
  p.drive_power_sq = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.drive_power_sq = 1.0;
  p.kappa_out = kKappa * 2.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("linear resonator limit is a Lorentzian") {
  for (double delta : linspace(-0.3, 0.3, 31)) {
    KerrDriveParams p{delta, kKappa, 0.0, 0.5, kKappa};
    SteadyState st = steady_state(p);
    REQUIRE(st.photon_roots.size() == 1);
    CHECK(!st.bistable);
    double want = 0.5 / (delta * delta + kKappa * kKappa / 4.0);
    CHECK(st.photon_roots[0] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("every steady-state root satisfies the cubic") {
  double ec2 = critical_drive(kKappa, kEta);
  ec2 *= ec2;
  for (double frac : {0.2, 0.6, 0.95, 1.3, 2.0}) {
    KerrDriveParams p{0.0, kKappa, kEta, frac * ec2, kKappa};
    for (double delta : linspace(-6.0 * kKappa, 2.0 * kKappa, 161)) {
      p.delta_dr = delta;
      SteadyState st = steady_state(p);
      for (double n : st.photon_roots) {
        // residual scaled by the cubic's own magnitude at the drive level
        CHECK(std::abs(cubic_residual(p, n)) <=
              1e-10 * std::max(1.0, p.drive_power_sq));
      }
    }
  }
}

TEST_CASE("numeric fold threshold agrees with the closed form") {
  for (double kappa : {0.05, 0.1, 0.4}) {
    for (double eta : {1e-5, 2.64e-4, 3e-3}) {
      double closed = std::pow(kappa, 3) / (std::pow(3.0, 1.5) * eta);
      double numeric = fold_threshold_drive_sq(kappa, eta);
      CHECK(numeric == doctest::Approx(closed).epsilon(1e-9));
      CHECK(critical_drive(kappa, eta) ==
            doctest::Approx(std::sqrt(closed)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(fold_threshold_drive_sq(kKappa, 0.0), NumericalError);
}

TEST_CASE("three-root window opens only above the critical drive") {
  double ec2 = critical_drive(kKappa, kEta);
  ec2 *= ec2;
  auto max_disc = [&](double e2) {
    double best = -1e300;
    for (double delta : linspace(-8.0 * kKappa, 0.0, 4001)) {
      KerrDriveParams p{delta, kKappa, kEta, e2, kKappa};
      best = std::max(best, cubic_discriminant(p));
    }
    return best;
  };

  CHECK(max_disc(0.999 * ec2) < 0.0);
  CHECK(max_disc(1.05 * ec2) > 0.0);

  // bistable flag mirrors the discriminant
  KerrDriveParams below{-2.0 * kKappa, kKappa, kEta, 0.5 * ec2, kKappa};
  CHECK(!steady_state(below).bistable);
}

TEST_CASE("hysteresis: sweep direction selects opposite branches in the window") {
  double ec2 = critical_drive(kKappa, kEta);
  double e2 = 2.5 * ec2 * ec2;
  auto deltas = linspace(-8.0 * kKappa, 1.0 * kKappa, 901);

  std::vector<double> up(deltas.size()), down(deltas.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    KerrDriveParams p{deltas[i], kKappa, kEta, e2, kKappa};
    SteadyState st = steady_state_continued(p, prev);
    prev = st.photon_roots[st.selected];
    up[i] = prev;
  }
  prev = 0.0;
  for (std::size_t i = deltas.size(); i-- > 0;) {
    KerrDriveParams p{deltas[i], kKappa, kEta, e2, kKappa};
    SteadyState st = steady_state_continued(p, prev);
    prev = st.photon_roots[st.selected];
    down[i] = prev;
  }

  bool branches_split = false;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    KerrDriveParams p{deltas[i], kKappa, kEta, e2, kKappa};
    if (steady_state(p).bistable) {
      if (up[i] != down[i]) branches_split = true;
    } else {
      CHECK(up[i] == doctest::Approx(down[i]).epsilon(1e-9));
    }
  }
  CHECK(branches_split);
}

TEST_CASE("peak photon number at the linear-response point") {
  // on the shifted resonance the cubic collapses to n = |E|^2 / (kappa/2)^2
  for (double e2 : {0.1, 0.5, 2.0}) {
    double n_star = e2 / (kKappa * kKappa / 4.0);
    KerrDriveParams p{-kEta * n_star, kKappa, kEta, e2, kKappa};
    SteadyState st = steady_state(p);
    double n_big = st.photon_roots.back();
    CHECK(n_big == doctest::Approx(n_star).epsilon(1e-10));
  }
}

TEST_CASE("phase response inverts exactly inside its branch") {
  double Q = 49600.0, omega_m = 4960.0;
  for (double shift : linspace(-0.04, 0.04, 17)) {
    double phi = phase_response(omega_m, omega_m + shift, Q);
    CHECK(std::abs(phi) < 3.14159265 / 2.0);
    double back = invert_phase(phi, Q, omega_m);
    // bare-frequency denominator leaves a shift/omega ~ 1e-5 systematic
    CHECK(back == doctest::Approx(shift).epsilon(1e-4));
  }

  CHECK_THROWS_AS(invert_phase(1.6, Q, omega_m), NumericalError);
  CHECK_THROWS_AS(invert_phase(0.1, -1.0, omega_m), ConfigError);
  CHECK_THROWS_AS(phase_response(omega_m, omega_m, -1.0), ConfigError);
}

TEST_CASE("response curve export") {
  auto deltas = linspace(-0.5, 0.3, 41);
  auto curve = response_curve(kKappa, kEta, 0.2, kKappa, deltas);
  REQUIRE(curve.size() == deltas.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].delta_dr == deltas[i]);
    CHECK(curve[i].n_bar >= 0.0);
    CHECK(std::abs(curve[i].phase) <= 3.1415926536);
  }

  auto path =
      (std::filesystem::temp_directory_path() / "kerr_curve_test.csv").string();
  write_response_csv(curve, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 42);  // header + points
  in.close();
  std::filesystem::remove(path);
}
