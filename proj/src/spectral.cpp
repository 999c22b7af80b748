#include "edgeburst/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace edgeburst {

Spectrum eigensystem(const Hamiltonian& h) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.entries, true);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("eigensystem: QR iteration did not converge");

  const int dim = h.dim();
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&ev](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  Spectrum spec;
  spec.bc = h.bc;
  spec.eigenvalues.resize(dim);
  spec.eigenvectors.resize(dim, dim);
  for (int j = 0; j < dim; ++j) {
    spec.eigenvalues(j) = ev(order[j]);
    spec.eigenvectors.col(j) =
        solver.eigenvectors().col(order[j]).normalized();
  }
  return spec;
}

double imaginary_gap(const Spectrum& spec) {
  return spec.eigenvalues.imag().maxCoeff();
}

DisplacementPair mean_displacement(const Spectrum& spec) {
  const int n = spec.cells();
  DisplacementPair d;
  for (int j = 0; j < spec.dim(); ++j) {
    for (int cell = 1; cell <= n; ++cell) {
      d.mean_a += cell * std::norm(spec.eigenvectors(site_index_a(cell), j));
      d.mean_b += cell * std::norm(spec.eigenvectors(site_index_b(cell), j));
    }
  }
  d.mean_a /= n;
  d.mean_b /= n;
  return d;
}

double spectra_compare(const Spectrum& a, const Spectrum& b) {
  const auto one_sided = [](const Eigen::VectorXcd& from,
                            const Eigen::VectorXcd& to) {
    double sup = 0.0;
    for (int i = 0; i < from.size(); ++i) {
      double inf = std::numeric_limits<double>::infinity();
      for (int j = 0; j < to.size(); ++j)
        inf = std::min(inf, std::abs(from(i) - to(j)));
      sup = std::max(sup, inf);
    }
    return sup;
  };
  return std::max(one_sided(a.eigenvalues, b.eigenvalues),
                  one_sided(b.eigenvalues, a.eigenvalues));
}

SublatticeIpr ipr_per_sublattice(const Spectrum& spec) {
  const int n = spec.cells();
  SublatticeIpr ipr{Eigen::VectorXd::Zero(spec.dim()),
                    Eigen::VectorXd::Zero(spec.dim())};
  for (int j = 0; j < spec.dim(); ++j) {
    double w2a = 0.0, w4a = 0.0, w2b = 0.0, w4b = 0.0;
    for (int cell = 1; cell <= n; ++cell) {
      const double wa = std::norm(spec.eigenvectors(site_index_a(cell), j));
      const double wb = std::norm(spec.eigenvectors(site_index_b(cell), j));
      w2a += wa;
      w4a += wa * wa;
      w2b += wb;
      w4b += wb * wb;
    }
    ipr.a(j) = (w2a < 1e-12) ? 0.0 : w4a / (w2a * w2a);
    ipr.b(j) = (w2b < 1e-12) ? 0.0 : w4b / (w2b * w2b);
  }
  return ipr;
}

}  // namespace edgeburst
