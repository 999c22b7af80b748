#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace edgeburst {

using Complex = std::complex<double>;

enum class LossKind { Uniform, Linear, Random };

// Per-cell loss rates gamma_1..gamma_N on the B sublattice.
//   Uniform: gamma_n = gamma
//   Linear:  gamma_n = gamma * n
//   Random:  gamma_n i.i.d. uniform on (0, gamma_max], reproducible per seed
struct LossProfile {
  LossKind kind = LossKind::Uniform;
  double gamma = 1.0;       // Uniform value / Linear rate of change
  double gamma_max = 1.0;   // Random upper bound
  std::uint64_t seed = 0;

  static LossProfile uniform(double gamma);
  static LossProfile linear(double gamma);
  static LossProfile random(double gamma_max, std::uint64_t seed);

  // The N rate values. Does not validate positivity; see LatticeParams.
  std::vector<double> values(int n_cells) const;
};

enum class BoundaryCondition { Open, Ring };

// Two-sublattice chain of n_cells unit cells with couplings t1 (intra-cell)
// and t2 (inter-cell), lossy on B. t1 = 0 is the broken-loop limit and is
// allowed; gamma_n = 0 is allowed only when allow_lossless is set (Hermitian
// diagnostic mode; the decay distribution is undefined there).
struct LatticeParams {
  double t1 = 0.3;
  double t2 = 0.5;
  int n_cells = 1;
  LossProfile loss;
  bool allow_lossless = false;

  void validate() const;
  // Validated gamma_1..gamma_N.
  std::vector<double> loss_values() const;
};

// Interleaved site ordering: (A_1, B_1, A_2, B_2, ...). Cells are 1-based.
inline int site_index_a(int cell) { return 2 * (cell - 1); }
inline int site_index_b(int cell) { return 2 * (cell - 1) + 1; }

// Generator of i d(psi)/dt = H psi, read off the coupled amplitude equations.
// Dense 2N x 2N; bandwidth 3 for Open, plus corner blocks for Ring.
struct Hamiltonian {
  Eigen::MatrixXcd entries;
  BoundaryCondition bc = BoundaryCondition::Open;
  LatticeParams params;

  int dim() const { return static_cast<int>(entries.rows()); }
  int cells() const { return params.n_cells; }
};

Hamiltonian build_hamiltonian(const LatticeParams& params, BoundaryCondition bc);

// 2x2 momentum-space matrix for the uniform-loss ring:
//   [[ t2 sin k,            t1 + t2 cos k ],
//    [ t1 + t2 cos k,      -t2 sin k - i gamma ]]
// Requires a Uniform profile; used as a cross-validation oracle for Ring
// spectra at quantized k = 2 pi m / N.
Eigen::Matrix2cd bloch_matrix(const LatticeParams& params, double k);

}  // namespace edgeburst
