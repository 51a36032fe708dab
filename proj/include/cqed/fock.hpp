#pragma once
#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Truncated product-space operator algebra, Hamiltonian assembly and the
// exact-diagonalization oracle with bare-state labeling.
//
// Unit convention: every frequency-like quantity in this library is omega/2pi
// in MHz. All coefficient formulas are homogeneous in frequency units, so no
// angular-frequency conversion appears anywhere.

namespace cqed::fock {

struct HilbertLayout {
  std::vector<std::pair<std::string, int>> subsystems;  // (name, dimension)
  int total_dim = 0;

  static HilbertLayout make(std::vector<std::pair<std::string, int>> subs);
  int position(const std::string& name) const;  // throws ConfigError
  bool has(const std::string& name) const;
  int dim(int pos) const { return subsystems[pos].second; }
  std::size_t count() const { return subsystems.size(); }
};

struct DenseOperator {
  HilbertLayout layout;
  Eigen::MatrixXcd m;
};

// relative Frobenius-norm Hermiticity test
bool is_hermitian(const Eigen::MatrixXcd& m, double tol_rel = 1e-12);

std::pair<DenseOperator, DenseOperator> ladder_ops(const HilbertLayout& layout,
                                                   const std::string& name);

// embed a single-subsystem matrix into the full product space
Eigen::MatrixXcd embed(const HilbertLayout& layout, int pos,
                       const Eigen::MatrixXcd& local);

struct ModeSpec {
  std::string name;
  double omega = 0.0;  // MHz
  double g = 0.0;      // MHz
  double kappa = 0.0;  // MHz
  std::optional<double> Q;  // dimensionless; omega/kappa when absent
};

struct DeviceSpec {
  double omega_q = 0.0;  // MHz
  double alpha = 0.0;    // MHz, > 0; enters H0 as -(alpha/2) q'q'qq
  std::vector<ModeSpec> modes;
  double beta = 0.0;  // photons per nW
  double zeta = 0.0;  // |E_dr|^2 per nW, MHz^2/nW

  void validate() const;  // throws ConfigError
  const ModeSpec& mode(const std::string& name) const;
  double quality(const ModeSpec& m) const;
  double detuning(const ModeSpec& m) const { return omega_q - m.omega; }
  // |g/Delta| >= 0.25 or resonant modes; advisory, not an error
  std::vector<std::string> dispersive_warnings() const;
};

// H0 + Hint on `layout`, whose subsystems must be exactly {mode_subset, "q"}.
DenseOperator assemble_hamiltonian(const DeviceSpec& spec,
                                   const HilbertLayout& layout,
                                   const std::vector<std::string>& mode_subset);

struct LabeledSpectrum {
  HilbertLayout layout;
  Eigen::VectorXd energies;              // ascending
  std::vector<std::vector<int>> labels;  // occupations, layout order
  std::vector<double> overlaps;          // squared overlap of the assignment

  // throws NumericalError when the label is missing or its assignment is
  // ambiguous (overlap <= 0.5)
  double energy_of(const std::vector<int>& label) const;

 private:
  friend LabeledSpectrum diagonalize_labeled(const DenseOperator&);
  std::map<std::vector<int>, int> index_;
};

// Exact eigen-decomposition; each eigenvector gets the bare label of maximal
// squared overlap, assigned greedily in descending overlap order with every
// label consumed once. States away from the truncation edge must come out
// unambiguous (> 0.5), otherwise a NumericalError names the offending label.
LabeledSpectrum diagonalize_labeled(const DenseOperator& H);

struct DressedCoefficients {
  double stark_D = 0.0;   // E(1,0,1)-E(1,0,0)-E(0,0,1)+E(0,0,0)
  double stark_M = 0.0;
  double kerr_DD = 0.0;   // E(2,0,0)-2E(1,0,0)+E(0,0,0)
  double kerr_MM = 0.0;
  double kerr_DM = 0.0;   // E(1,1,0)-E(1,0,0)-E(0,1,0)+E(0,0,0)
};

// finite differences of labeled dressed energies; layout must be two modes
// plus "q" (first mode listed is D, second is M)
DressedCoefficients dressed_coefficients(const LabeledSpectrum& s);

// default oracle truncation: 4 levels per mode, 5 on the transmon
HilbertLayout default_layout(const std::string& mode_D,
                             const std::string& mode_M, int mode_levels = 4,
                             int transmon_levels = 5);

// CSV export with columns energy_MHz,n_D,n_M,n_q,overlap
void write_spectrum_csv(const LabeledSpectrum& s, const std::string& path);

}  // namespace cqed::fock
