#pragma once
#include <Eigen/Dense>

// Fourth-order Schrieffer-Wolff engine on finite nondegenerate systems plus
// the closed-form AC-Stark/Kerr coefficient catalog. Frequencies are
// omega/2pi in MHz; coefficients are MHz per photon.

namespace cqed::sw {

// G1 and G2 are the order-1 and order-2 generators with the i factored out,
// i.e. stored as Hermitian matrices with zero diagonal; H2/H3/H4 are the
// diagonal corrections in the H0 eigenbasis.
struct SWCorrections {
  Eigen::MatrixXcd G1, G2;
  Eigen::VectorXd H2, H3, H4;
};

// <j|G1|k> = -i <j|V|k> / (E_j - E_k); requires a nondegenerate spectrum
// (pairwise gaps above gap_floor) and a zero-diagonal V.
Eigen::MatrixXcd generator1(const Eigen::VectorXd& H0_diag,
                            const Eigen::MatrixXcd& V,
                            double gap_floor = 1e-6);

// All generators and diagonal corrections through fourth order. The estimate
// E_j + H2_j + H3_j + H4_j tracks the exact eigenvalue with a residual of
// order ||V||^5 / gap^4.
SWCorrections corrections(const Eigen::VectorXd& H0_diag,
                          const Eigen::MatrixXcd& V, double gap_floor = 1e-6);

// ground-level closed coefficient forms
double chi_stark(double g, double delta, double alpha);
double kerr_self(double g, double delta, double alpha);
double kerr_cross(double gD, double gM, double deltaD, double deltaM,
                  double alpha);

struct ClosedFormKerr {
  double chi_stark = 0.0;
  double chi_self = 0.0;
  double chi_cross = 0.0;
  int level = 0;
};

// Closed forms per transmon excitation level (0 or 1 — higher levels are
// served numerically by `corrections`). Level-1 self comes out as the
// negative of the printed source expression: the numeric engine and the
// stated two-level limit both demand the flipped sign.
ClosedFormKerr kerr_excited(int level, double gA, double gB, double deltaA,
                            double deltaB, double alpha);

}  // namespace cqed::sw
