#include "cqed/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cqed/errors.hpp"

namespace cqed::lattice {

void LatticeSpec::validate() const {
  if (n_sites < 1) throw ConfigError("lattice: needs at least one site");
  if (qubit_site < 0 || qubit_site >= n_sites)
    throw ConfigError("lattice: qubit_site out of range");
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n_sites || b < 0 || b >= n_sites)
      throw ConfigError("lattice: edge endpoint out of range");
    if (a == b) throw ConfigError("lattice: self-loop in adjacency");
  }
}

Eigen::MatrixXd LatticeSpec::site_hamiltonian() const {
  validate();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_sites, n_sites);
  h.diagonal().setConstant(omega0);
  for (auto [a, b] : edges) {
    h(a, b) = -hopping;
    h(b, a) = -hopping;
  }
  return h;
}

namespace {

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

}  // namespace

NormalModes normal_modes(const LatticeSpec& spec) {
  Eigen::MatrixXd h = spec.site_hamiltonian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("lattice: eigensolver failed");

  NormalModes m;
  m.frequencies = solver.eigenvalues();
  m.wavefunctions = solver.eigenvectors();
  for (int j = 0; j < m.wavefunctions.cols(); ++j) {
    for (int i = 0; i < m.wavefunctions.rows(); ++i) {
      double v = m.wavefunctions(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) m.wavefunctions.col(j) *= -1.0;
        break;
      }
    }
  }
  m.couplings = spec.g0 * m.wavefunctions.row(spec.qubit_site).transpose();
  if (!is_connected(spec.n_sites, spec.edges))
    m.warnings.push_back("adjacency graph is disconnected");
  return m;
}

DosHistogram density_of_states(const NormalModes& modes, double bin_width) {
  if (bin_width <= 0.0) throw ConfigError("density_of_states: bin_width must be positive");
  if (modes.frequencies.size() == 0)
    throw ConfigError("density_of_states: no modes");
  DosHistogram h;
  h.lo = modes.frequencies.minCoeff();
  h.bin_width = bin_width;
  double hi = modes.frequencies.maxCoeff();
  int nbins = std::max(1, static_cast<int>(std::ceil((hi - h.lo) / bin_width)));
  h.counts.assign(nbins, 0);
  for (int j = 0; j < modes.frequencies.size(); ++j) {
    int k = static_cast<int>((modes.frequencies[j] - h.lo) / bin_width);
    k = std::clamp(k, 0, nbins - 1);
    ++h.counts[k];
  }
  return h;
}

void write_modes_csv(const NormalModes& modes, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  std::fprintf(f, "mode_index,freq_MHz,g_MHz\n");
  for (int j = 0; j < modes.frequencies.size(); ++j)
    std::fprintf(f, "%d,%.17g,%.17g\n", j, modes.frequencies[j],
                 modes.couplings[j]);
  std::fclose(f);
}

}  // namespace cqed::lattice
