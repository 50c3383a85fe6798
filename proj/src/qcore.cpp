#include "rydswap/qcore.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace rydswap {

int LevelScheme::level(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ModelError("unknown level label '" + label + "'");
}

int LevelScheme::logical(int bit) const {
  int seen = 0;
  for (int i = 0; i < size(); ++i) {
    if (rydberg[i]) continue;
    if (seen == bit) return i;
    ++seen;
  }
  throw ModelError("level scheme has fewer than two logical levels");
}

void LevelScheme::validate() const {
  if (labels.size() != rydberg.size() || labels.size() != decay_rate.size()) {
    throw ModelError("level scheme field sizes differ");
  }
  int logical_count = 0;
  for (int i = 0; i < size(); ++i) {
    if (!rydberg[i]) ++logical_count;
    if (!(decay_rate[i] >= 0.0)) throw ModelError("negative decay rate on level " + labels[i]);
    if (!rydberg[i] && decay_rate[i] != 0.0) {
      throw ModelError("decay on non-Rydberg level " + labels[i]);
    }
    for (int j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) throw ModelError("duplicate level label " + labels[i]);
    }
  }
  if (logical_count < 2) throw ModelError("level scheme needs at least two logical levels");
}

LevelScheme three_level_scheme(double tau_us) {
  const double gamma = tau_us > 0.0 ? 1.0 / tau_us : 0.0;
  return {{"0", "1", "r"}, {false, false, true}, {0.0, 0.0, gamma}};
}

LevelScheme mux_control_scheme(double tau_us) {
  const double gamma = tau_us > 0.0 ? 1.0 / tau_us : 0.0;
  return {{"0", "1", "rP", "rD"}, {false, false, true, true}, {0.0, 0.0, gamma, gamma}};
}

bool ProductBasis::has_rydberg(std::size_t index) const {
  for (int a = 0; a < atoms(); ++a) {
    if (schemes[a].is_rydberg(level_of(index, a))) return true;
  }
  return false;
}

ProductBasis build_basis(const std::vector<LevelScheme>& schemes) {
  if (schemes.empty()) throw ModelError("basis needs at least one atom");
  for (const auto& s : schemes) s.validate();
  ProductBasis b;
  b.schemes = schemes;
  const int n = b.atoms();
  b.strides.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) b.strides[a] = b.strides[a + 1] * schemes[a + 1].size();
  b.dim = b.strides[0] * schemes[0].size();
  const std::size_t ncomp = std::size_t{1} << n;
  b.comp_indices.reserve(ncomp);
  for (std::size_t c = 0; c < ncomp; ++c) {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) idx += b.strides[a] * schemes[a].logical(b.bit(c, a));
    b.comp_indices.push_back(idx);
  }
  return b;
}

std::size_t index_of_levels(const ProductBasis& basis, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != basis.atoms()) throw ModelError("label count mismatch");
  std::size_t idx = 0;
  for (int a = 0; a < basis.atoms(); ++a) {
    if (levels[a] < 0 || levels[a] >= basis.schemes[a].size()) throw ModelError("level out of range");
    idx += basis.strides[a] * levels[a];
  }
  return idx;
}

std::size_t index_of(const ProductBasis& basis, const std::vector<std::string>& labels) {
  if (static_cast<int>(labels.size()) != basis.atoms()) throw ModelError("label count mismatch");
  std::vector<int> levels(labels.size());
  for (int a = 0; a < basis.atoms(); ++a) levels[a] = basis.schemes[a].level(labels[a]);
  return index_of_levels(basis, levels);
}

std::vector<int> levels_of(const ProductBasis& basis, std::size_t index) {
  if (index >= basis.dim) throw ModelError("basis index out of range");
  std::vector<int> levels(basis.atoms());
  for (int a = 0; a < basis.atoms(); ++a) levels[a] = basis.level_of(index, a);
  return levels;
}

std::vector<std::string> labels_of(const ProductBasis& basis, std::size_t index) {
  const auto levels = levels_of(basis, index);
  std::vector<std::string> out(levels.size());
  for (std::size_t a = 0; a < levels.size(); ++a) out[a] = basis.schemes[a].labels[levels[a]];
  return out;
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw ModelError("eigen-decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm_minus_i(const CMatrix& h, double dt) {
  const CMatrix a = (-kI * dt) * h;
  return a.exp();
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

}  // namespace rydswap
