#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace cqed::lattice {

// Tight-binding array of coupled resonators,
//   H = omega0 * sum_n a_n^dag a_n - hopping * sum_<n,n'> a_n^dag a_n'
// on the graph given by `edges`. One site hosts the qubit; the projection of
// each normal mode onto that site sets the per-mode coupling.
struct LatticeSpec {
  int n_sites = 0;
  double omega0 = 0.0;   // on-site frequency, MHz
  double hopping = 0.0;  // t, MHz
  std::vector<std::pair<int, int>> edges;
  int qubit_site = 0;
  double g0 = 0.0;  // bare qubit-site coupling, MHz

  void validate() const;
  Eigen::MatrixXd site_hamiltonian() const;
};

struct NormalModes {
  Eigen::VectorXd frequencies;    // ascending, MHz
  Eigen::MatrixXd wavefunctions;  // site x mode, orthonormal columns
  Eigen::VectorXd couplings;      // g_j = g0 * psi_j(qubit_site), MHz
  std::vector<std::string> warnings;
};

NormalModes normal_modes(const LatticeSpec& spec);

struct DosHistogram {
  double lo = 0.0;
  double bin_width = 0.0;
  std::vector<int> counts;
};

DosHistogram density_of_states(const NormalModes& modes, double bin_width);

void write_modes_csv(const NormalModes& modes, const std::string& path);

}  // namespace cqed::lattice
