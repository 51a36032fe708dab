#include "cqed/swpt.hpp"

#include <cmath>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed::sw {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_inputs(const Eigen::VectorXd& E, const Eigen::MatrixXcd& V,
                  double gap_floor) {
  const int n = static_cast<int>(E.size());
  if (V.rows() != n || V.cols() != n)
    throw ConfigError("sw: V does not match H0 dimension");
  double vscale = std::max(1.0, V.norm());
  for (int j = 0; j < n; ++j)
    if (std::abs(V(j, j)) > 1e-12 * vscale)
      throw ConfigError("sw: V has a nonzero diagonal entry at index " +
                        std::to_string(j));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (std::abs(E[j] - E[k]) <= gap_floor) {
        std::ostringstream os;
        os << "sw: degenerate H0 levels " << j << " and " << k << " (E = "
           << E[j] << ", " << E[k] << " MHz)";
        throw NumericalError(os.str());
      }
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a,
                            const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

void pole_guard(double value, const char* what) {
  if (std::abs(value) < 1e-9)
    throw NumericalError(std::string("resonant input: ") + what +
                         " vanishes, coefficient formula has a pole");
}

}  // namespace

Eigen::MatrixXcd generator1(const Eigen::VectorXd& E, const Eigen::MatrixXcd& V,
                            double gap_floor) {
  check_inputs(E, V, gap_floor);
  const int n = static_cast<int>(E.size());
  Eigen::MatrixXcd G1 = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) G1(j, k) = -kI * V(j, k) / (E[j] - E[k]);
  return G1;
}

SWCorrections corrections(const Eigen::VectorXd& E, const Eigen::MatrixXcd& V,
                          double gap_floor) {
  const int n = static_cast<int>(E.size());
  Eigen::MatrixXcd G1 = generator1(E, V, gap_floor);

  Eigen::MatrixXcd C1 = commutator(G1, V);            // [G1,V]
  Eigen::MatrixXcd C11 = commutator(G1, C1);          // [G1,[G1,V]]
  Eigen::MatrixXcd C111 = commutator(G1, C11);        // [G1,[G1,[G1,V]]]

  Eigen::MatrixXcd G2(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      G2(j, k) = j == k ? 0.0 : C1(j, k) / (2.0 * (E[j] - E[k]));
  Eigen::MatrixXcd C2 = commutator(G2, C1);           // [G2,[G1,V]]

  SWCorrections out;
  out.G1 = std::move(G1);
  out.G2 = std::move(G2);
  out.H2 = (kI * 0.5 * C1.diagonal()).real();
  out.H3 = (-C11.diagonal() / 3.0).real();
  out.H4 = (-(kI * C111.diagonal() / 8.0 + C2.diagonal() / 4.0)).real();
  return out;
}

// ---- closed forms ----

double chi_stark(double g, double delta, double alpha) {
  pole_guard(delta, "Delta");
  pole_guard(alpha - delta, "alpha - Delta");
  return 2.0 * g * g * alpha / (delta * (alpha - delta));
}

double kerr_self(double g, double delta, double alpha) {
  pole_guard(delta, "Delta");
  pole_guard(alpha - 2.0 * delta, "alpha - 2 Delta");
  double g2 = g * g;
  return 2.0 * g2 * g2 * alpha / (delta * delta * delta * (alpha - 2.0 * delta));
}

double kerr_cross(double gD, double gM, double deltaD, double deltaM,
                  double alpha) {
  pole_guard(deltaD, "Delta_D");
  pole_guard(deltaM, "Delta_M");
  pole_guard(alpha - deltaD - deltaM, "alpha - Delta_D - Delta_M");
  double dd2 = deltaD * deltaD, dm2 = deltaM * deltaM;
  return 2.0 * alpha * gD * gD * gM * gM * (deltaD + deltaM) /
         (dd2 * dm2 * (alpha - deltaD - deltaM));
}

namespace {

// second-order mode pull with the transmon at excitation n
double mode_pull(double g, double d, double alpha, int n) {
  pole_guard(d - n * alpha, "Delta - n alpha");
  if (n > 0) pole_guard(d - (n - 1) * alpha, "Delta - (n-1) alpha");
  double up = -g * g * (n + 1.0) / (d - n * alpha);
  double down = n > 0 ? g * g * n / (d - (n - 1.0) * alpha) : 0.0;
  return up + down;
}

double stark_level1(double g, double d, double alpha) {
  return mode_pull(g, d, alpha, 2) - mode_pull(g, d, alpha, 1);
}

double self_level1(double g, double d, double alpha) {
  pole_guard(d, "Delta");
  pole_guard(d - alpha, "Delta - alpha");
  pole_guard(2.0 * d - 3.0 * alpha, "2 Delta - 3 alpha");
  double d3 = d * d * d;
  double num = 2.0 * std::pow(g, 4) * alpha *
               (d3 + 5.0 * (alpha * d * d - alpha * alpha * d) +
                3.0 * std::pow(alpha, 3));
  double den = d3 * std::pow(d - alpha, 3) * (2.0 * d - 3.0 * alpha);
  return -(num / den);
}

double cross_level1(double ga, double gb, double da, double db, double alpha) {
  pole_guard(da, "Delta_A");
  pole_guard(db, "Delta_B");
  pole_guard(da - alpha, "Delta_A - alpha");
  pole_guard(db - alpha, "Delta_B - alpha");
  pole_guard(da + db - 3.0 * alpha, "Delta_A + Delta_B - 3 alpha");
  double a2 = alpha * alpha;
  double num = -2.0 * ga * ga * gb * gb * alpha *
               (da * da * db * db + 2.0 * alpha * da * db * (da + db) -
                a2 * (8.0 * da * db + da * da + db * db) +
                4.0 * a2 * alpha * (da + db) - 3.0 * a2 * a2);
  double den = da * db * std::pow(da - alpha, 2) * std::pow(db - alpha, 2) *
               (da + db - 3.0 * alpha);
  return num / den * (1.0 / da + 1.0 / db);
}

}  // namespace

ClosedFormKerr kerr_excited(int level, double gA, double gB, double deltaA,
                            double deltaB, double alpha) {
  ClosedFormKerr out;
  out.level = level;
  if (level == 0) {
    out.chi_stark = chi_stark(gA, deltaA, alpha);
    out.chi_self = kerr_self(gA, deltaA, alpha);
    out.chi_cross = kerr_cross(gA, gB, deltaA, deltaB, alpha);
  } else if (level == 1) {
    out.chi_stark = stark_level1(gA, deltaA, alpha);
    out.chi_self = self_level1(gA, deltaA, alpha);
    out.chi_cross = cross_level1(gA, gB, deltaA, deltaB, alpha);
  } else {
    throw ConfigError(
        "kerr_excited: closed forms cover levels 0 and 1; use the numeric "
        "engine for higher levels");
  }
  return out;
}

}  // namespace cqed::sw
