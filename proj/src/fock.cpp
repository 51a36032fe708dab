#include "cqed/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed::fock {

// ---- layout ----

HilbertLayout HilbertLayout::make(
    std::vector<std::pair<std::string, int>> subs) {
  if (subs.empty()) throw ConfigError("layout: no subsystems");
  std::set<std::string> names;
  long long total = 1;
  for (const auto& [name, dim] : subs) {
    if (name.empty()) throw ConfigError("layout: empty subsystem name");
    if (!names.insert(name).second)
      throw ConfigError("layout: duplicate subsystem '" + name + "'");
    if (dim < 2)
      throw ConfigError("layout: subsystem '" + name + "' needs dimension >= 2");
    total *= dim;
    if (total > (1 << 22))
      throw ConfigError("layout: total dimension too large");
  }
  HilbertLayout out;
  out.subsystems = std::move(subs);
  out.total_dim = static_cast<int>(total);
  return out;
}

int HilbertLayout::position(const std::string& name) const {
  for (std::size_t k = 0; k < subsystems.size(); ++k)
    if (subsystems[k].first == name) return static_cast<int>(k);
  throw ConfigError("layout: unknown subsystem '" + name + "'");
}

bool HilbertLayout::has(const std::string& name) const {
  for (const auto& [n, d] : subsystems)
    if (n == name) return true;
  return false;
}

// ---- operators ----

bool is_hermitian(const Eigen::MatrixXcd& m, double tol_rel) {
  double scale = m.norm();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).norm() <= tol_rel * scale;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd local_lowering(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

}  // namespace

Eigen::MatrixXcd embed(const HilbertLayout& layout, int pos,
                       const Eigen::MatrixXcd& local) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < layout.count(); ++k) {
    if (static_cast<int>(k) == pos)
      acc = kron(acc, local);
    else
      acc = kron(acc, Eigen::MatrixXcd::Identity(layout.dim(k), layout.dim(k)));
  }
  return acc;
}

std::pair<DenseOperator, DenseOperator> ladder_ops(const HilbertLayout& layout,
                                                   const std::string& name) {
  int pos = layout.position(name);
  Eigen::MatrixXcd a = embed(layout, pos, local_lowering(layout.dim(pos)));
  return {DenseOperator{layout, a}, DenseOperator{layout, a.adjoint()}};
}

// ---- device ----

void DeviceSpec::validate() const {
  if (alpha <= 0.0) throw ConfigError("device: alpha must be positive (MHz)");
  if (beta < 0.0) throw ConfigError("device: beta must be >= 0");
  if (zeta < 0.0) throw ConfigError("device: zeta must be >= 0");
  std::set<std::string> names;
  for (const auto& m : modes) {
    if (m.name.empty() || m.name == "q")
      throw ConfigError("device: bad mode name '" + m.name + "'");
    if (!names.insert(m.name).second)
      throw ConfigError("device: duplicate mode '" + m.name + "'");
    if (m.kappa <= 0.0)
      throw ConfigError("device: mode '" + m.name + "' needs kappa > 0");
    if (m.Q) {
      double ref = m.omega / m.kappa;
      if (std::abs(*m.Q - ref) > 1e-9 * std::abs(ref))
        throw ConfigError("device: mode '" + m.name +
                          "' has Q inconsistent with omega/kappa");
    }
  }
}

const ModeSpec& DeviceSpec::mode(const std::string& name) const {
  for (const auto& m : modes)
    if (m.name == name) return m;
  throw ConfigError("device: unknown mode '" + name + "'");
}

double DeviceSpec::quality(const ModeSpec& m) const {
  return m.Q ? *m.Q : m.omega / m.kappa;
}

std::vector<std::string> DeviceSpec::dispersive_warnings() const {
  std::vector<std::string> out;
  for (const auto& m : modes) {
    double d = detuning(m);
    if (d == 0.0) {
      out.push_back("mode '" + m.name + "' is resonant with the qubit");
    } else if (std::abs(m.g / d) >= 0.25) {
      std::ostringstream os;
      os << "mode '" << m.name << "': |g/Delta| = " << std::abs(m.g / d)
         << " is outside the dispersive regime";
      out.push_back(os.str());
    }
  }
  return out;
}

// ---- Hamiltonian ----

DenseOperator assemble_hamiltonian(const DeviceSpec& spec,
                                   const HilbertLayout& layout,
                                   const std::vector<std::string>& mode_subset) {
  spec.validate();
  if (mode_subset.empty()) throw ConfigError("assemble: empty mode subset");
  if (!layout.has("q")) throw ConfigError("assemble: layout lacks 'q'");
  if (layout.count() != mode_subset.size() + 1)
    throw ConfigError("assemble: layout must hold exactly the qubit plus the subset");

  int qpos = layout.position("q");
  int qdim = layout.dim(qpos);
  Eigen::MatrixXcd nq_local =
      (local_lowering(qdim).adjoint() * local_lowering(qdim));
  Eigen::MatrixXcd anh_local = Eigen::MatrixXcd::Zero(qdim, qdim);
  for (int n = 0; n < qdim; ++n) anh_local(n, n) = double(n) * (n - 1.0);

  Eigen::MatrixXcd H = spec.omega_q * embed(layout, qpos, nq_local) -
                       0.5 * spec.alpha * embed(layout, qpos, anh_local);

  auto [qlow, qraise] = ladder_ops(layout, "q");
  for (const auto& name : mode_subset) {
    const ModeSpec& m = spec.mode(name);
    int pos = layout.position(name);
    Eigen::MatrixXcd a = embed(layout, pos, local_lowering(layout.dim(pos)));
    H += m.omega * (a.adjoint() * a).eval();
    H += m.g * (qraise.m * a + a.adjoint() * qlow.m).eval();
  }

  if (!is_hermitian(H))
    throw NumericalError("assemble: non-Hermitian Hamiltonian (internal bug)");
  return DenseOperator{layout, H};
}

// ---- labeled diagonalization ----

namespace {

std::vector<int> bare_label(const HilbertLayout& layout, int index) {
  std::vector<int> occ(layout.count());
  for (int k = static_cast<int>(layout.count()) - 1; k >= 0; --k) {
    occ[k] = index % layout.dim(k);
    index /= layout.dim(k);
  }
  return occ;
}

std::string label_str(const std::vector<int>& occ) {
  std::string s = "(";
  for (std::size_t k = 0; k < occ.size(); ++k)
    s += (k ? "," : "") + std::to_string(occ[k]);
  return s + ")";
}

// occupation band whose assignments must be unambiguous: the levels the
// coefficient oracle queries (n <= 2 per slot), and only where the truncation
// edge cannot reach them. Higher states may mix freely; energy_of re-checks
// the overlap of whatever label is actually used.
bool interior(const HilbertLayout& layout, const std::vector<int>& occ) {
  for (std::size_t k = 0; k < occ.size(); ++k) {
    int dim = layout.dim(k);
    int guard = std::min(dim <= 3 ? dim - 1 : dim - 3, 2);
    if (occ[k] > guard) return false;
  }
  return true;
}

}  // namespace

double LabeledSpectrum::energy_of(const std::vector<int>& label) const {
  auto it = index_.find(label);
  if (it == index_.end())
    throw NumericalError("spectrum: missing label " + label_str(label));
  if (overlaps[it->second] <= 0.5)
    throw NumericalError("spectrum: ambiguous assignment for label " +
                         label_str(label) + " (overlap " +
                         std::to_string(overlaps[it->second]) + ")");
  return energies[it->second];
}

LabeledSpectrum diagonalize_labeled(const DenseOperator& H) {
  if (!is_hermitian(H.m))
    throw NumericalError("diagonalize: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("diagonalize: eigensolver failed");

  const int N = H.layout.total_dim;
  const Eigen::MatrixXcd& U = solver.eigenvectors();

  struct Entry {
    double w;
    int eig, bare;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(N) * N);
  for (int e = 0; e < N; ++e)
    for (int b = 0; b < N; ++b)
      entries.push_back({std::norm(U(b, e)), e, b});
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.w != y.w) return x.w > y.w;
    if (x.eig != y.eig) return x.eig < y.eig;
    return x.bare < y.bare;
  });

  std::vector<int> bare_of(N, -1);
  std::vector<double> weight(N, 0.0);
  std::vector<char> bare_used(N, 0);
  int assigned = 0;
  for (const Entry& it : entries) {
    if (assigned == N) break;
    if (bare_of[it.eig] >= 0 || bare_used[it.bare]) continue;
    bare_of[it.eig] = it.bare;
    bare_used[it.bare] = 1;
    weight[it.eig] = it.w;
    ++assigned;
  }

  LabeledSpectrum out;
  out.layout = H.layout;
  out.energies = solver.eigenvalues();
  out.labels.resize(N);
  out.overlaps.resize(N);
  for (int e = 0; e < N; ++e) {
    out.labels[e] = bare_label(H.layout, bare_of[e]);
    out.overlaps[e] = weight[e];
    out.index_[out.labels[e]] = e;
    if (weight[e] <= 0.5 && interior(H.layout, out.labels[e]))
      throw NumericalError("diagonalize: ambiguous assignment for label " +
                           label_str(out.labels[e]) + " (overlap " +
                           std::to_string(weight[e]) + ")");
  }
  return out;
}

// ---- dressed coefficients ----

namespace {

// reorder a (D,M,q)-style query into the spectrum's layout order
struct TripletIndexer {
  int posD, posM, posQ;
  explicit TripletIndexer(const HilbertLayout& layout) {
    if (layout.count() != 3)
      throw ConfigError("dressed coefficients need two modes plus the qubit");
    posQ = layout.position("q");
    std::vector<int> rest;
    for (int k = 0; k < 3; ++k)
      if (k != posQ) rest.push_back(k);
    posD = rest[0];
    posM = rest[1];
  }
  std::vector<int> operator()(int nD, int nM, int nq) const {
    std::vector<int> occ(3);
    occ[posD] = nD;
    occ[posM] = nM;
    occ[posQ] = nq;
    return occ;
  }
};

}  // namespace

DressedCoefficients dressed_coefficients(const LabeledSpectrum& s) {
  TripletIndexer at(s.layout);
  auto E = [&](int nD, int nM, int nq) { return s.energy_of(at(nD, nM, nq)); };

  DressedCoefficients c;
  double E000 = E(0, 0, 0);
  c.stark_D = E(1, 0, 1) - E(1, 0, 0) - E(0, 0, 1) + E000;
  c.stark_M = E(0, 1, 1) - E(0, 1, 0) - E(0, 0, 1) + E000;
  c.kerr_DD = E(2, 0, 0) - 2.0 * E(1, 0, 0) + E000;
  c.kerr_MM = E(0, 2, 0) - 2.0 * E(0, 1, 0) + E000;
  c.kerr_DM = E(1, 1, 0) - E(1, 0, 0) - E(0, 1, 0) + E000;
  return c;
}

HilbertLayout default_layout(const std::string& mode_D,
                             const std::string& mode_M, int mode_levels,
                             int transmon_levels) {
  return HilbertLayout::make(
      {{mode_D, mode_levels}, {mode_M, mode_levels}, {"q", transmon_levels}});
}

void write_spectrum_csv(const LabeledSpectrum& s, const std::string& path) {
  TripletIndexer at(s.layout);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  std::fprintf(f, "energy_MHz,n_D,n_M,n_q,overlap\n");
  for (int e = 0; e < s.energies.size(); ++e) {
    const auto& occ = s.labels[e];
    std::fprintf(f, "%.17g,%d,%d,%d,%.17g\n", s.energies[e], occ[at.posD],
                 occ[at.posM], occ[at.posQ], s.overlaps[e]);
  }
  std::fclose(f);
}

}  // namespace cqed::fock
