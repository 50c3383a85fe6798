// Product bases of multi-level atoms and dense complex linear algebra helpers.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydswap {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cplx kI{0.0, 1.0};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal levels of one atom. The first two non-Rydberg levels are the
// logical |0> and |1>.
struct LevelScheme {
  std::vector<std::string> labels;
  std::vector<bool> rydberg;
  std::vector<double> decay_rate;  // 1/us

  int size() const { return static_cast<int>(labels.size()); }
  int level(const std::string& label) const;  // throws on unknown label
  int logical(int bit) const;                 // level index of |0> or |1>
  bool is_rydberg(int lvl) const { return rydberg[lvl]; }
  void validate() const;
};

// {0, 1, r} with r decaying at 1/tau.
LevelScheme three_level_scheme(double tau_us);
// {0, 1, rP, rD}: two Rydberg manifolds reachable from |0> and |1>.
LevelScheme mux_control_scheme(double tau_us);

struct ProductBasis {
  std::vector<LevelScheme> schemes;
  std::size_t dim = 0;
  std::vector<std::size_t> strides;      // atom 0 most significant
  std::vector<std::size_t> comp_indices;  // 2^N logical states, 00..0 -> 11..1

  int atoms() const { return static_cast<int>(schemes.size()); }
  int level_of(std::size_t index, int atom) const {
    return static_cast<int>((index / strides[atom]) % schemes[atom].size());
  }
  bool has_rydberg(std::size_t index) const;
  // Bit pattern of a computational index position (atom 0 is the MSB).
  int bit(std::size_t comp_pos, int atom) const {
    return static_cast<int>((comp_pos >> (atoms() - 1 - atom)) & 1U);
  }
};

ProductBasis build_basis(const std::vector<LevelScheme>& schemes);
std::size_t index_of(const ProductBasis& basis, const std::vector<std::string>& labels);
std::size_t index_of_levels(const ProductBasis& basis, const std::vector<int>& levels);
std::vector<std::string> labels_of(const ProductBasis& basis, std::size_t index);
std::vector<int> levels_of(const ProductBasis& basis, std::size_t index);

// Eigen-decomposition of a Hermitian matrix: H = V diag(w) V^dagger.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& h);

// exp(-i H dt) for a general (possibly non-Hermitian) H.
CMatrix expm_minus_i(const CMatrix& h, double dt);

double wrap_phase(double phi);  // into (-pi, pi]

}  // namespace rydswap
