#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "edgeburst/model.hpp"

namespace edgeburst {

// Thrown when the eigensolver's QR iteration fails to converge.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full right eigensystem of a Hamiltonian. Eigenpairs are sorted by
// (Re E, Im E) and eigenvectors are unit-norm columns, so per state
// sum_n |phi_n^A|^2 + |phi_n^B|^2 = 1 in the interleaved site ordering.
struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  BoundaryCondition bc = BoundaryCondition::Open;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  int cells() const { return dim() / 2; }
};

Spectrum eigensystem(const Hamiltonian& h);

// max over eigenvalues of Im E. Zero magnitude means the spectrum touches
// the real axis (imaginary gaplessness); for dissipative systems the value
// is <= 0 up to roundoff.
double imaginary_gap(const Spectrum& spec);

// Eigenstate-averaged center of weight per sublattice,
//   mean_X = (1/N) sum_{all 2N states} sum_n n |phi_n^X|^2.
// Values much smaller than N indicate skin localization at the left edge.
struct DisplacementPair {
  double mean_a = 0.0;
  double mean_b = 0.0;
};

DisplacementPair mean_displacement(const Spectrum& spec);

// Symmetric Hausdorff distance between the two eigenvalue sets in the
// complex plane; quantifies boundary-condition sensitivity of the spectrum.
double spectra_compare(const Spectrum& a, const Spectrum& b);

// Per-eigenstate inverse participation ratio on each sublattice,
//   IPR_X = sum_n |phi_n^X|^4 / (sum_n |phi_n^X|^2)^2,
// ~1 for single-site localization, ~1/N for extended states. States with
// sublattice weight below 1e-12 report 0.
struct SublatticeIpr {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

SublatticeIpr ipr_per_sublattice(const Spectrum& spec);

}  // namespace edgeburst
