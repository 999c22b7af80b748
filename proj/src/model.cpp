#include "edgeburst/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace edgeburst {

LossProfile LossProfile::uniform(double gamma) {
  return {LossKind::Uniform, gamma, 0.0, 0};
}

LossProfile LossProfile::linear(double gamma) {
  return {LossKind::Linear, gamma, 0.0, 0};
}

LossProfile LossProfile::random(double gamma_max, std::uint64_t seed) {
  return {LossKind::Random, 0.0, gamma_max, seed};
}

std::vector<double> LossProfile::values(int n_cells) const {
  std::vector<double> g(static_cast<std::size_t>(n_cells));
  switch (kind) {
    case LossKind::Uniform:
      for (int n = 1; n <= n_cells; ++n) g[n - 1] = gamma;
      break;
    case LossKind::Linear:
      for (int n = 1; n <= n_cells; ++n) g[n - 1] = gamma * n;
      break;
    case LossKind::Random: {
      // Raw engine words mapped to (0, gamma_max]; the engine output is
      // pinned by the standard, so draws are identical across platforms.
      std::mt19937_64 rng(seed);
      for (int n = 1; n <= n_cells; ++n) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        g[n - 1] = gamma_max * (1.0 - u);
      }
      break;
    }
  }
  return g;
}

void LatticeParams::validate() const {
  if (n_cells < 1) throw std::invalid_argument("lattice: n_cells must be >= 1");
  if (!(t1 >= 0.0)) throw std::invalid_argument("lattice: t1 must be >= 0");
  if (!(t2 > 0.0)) throw std::invalid_argument("lattice: t2 must be > 0");
  if (loss.kind == LossKind::Random && !(loss.gamma_max > 0.0))
    throw std::invalid_argument("lattice: random profile needs gamma_max > 0");
  const double lo = allow_lossless ? 0.0 : std::nextafter(0.0, 1.0);
  for (double g : loss.values(n_cells)) {
    if (!(g >= lo) || !std::isfinite(g))
      throw std::invalid_argument(
          allow_lossless ? "lattice: loss rates must be >= 0"
                         : "lattice: loss rates must be > 0");
  }
}

std::vector<double> LatticeParams::loss_values() const {
  validate();
  return loss.values(n_cells);
}

Hamiltonian build_hamiltonian(const LatticeParams& params, BoundaryCondition bc) {
  params.validate();
  const auto gamma = params.loss.values(params.n_cells);
  const int n = params.n_cells;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const Complex a_hop_left(0.0, 0.5 * params.t2);  // +i t2/2 toward cell n-1
  const double cross_hop = 0.5 * params.t2;
  for (int cell = 1; cell <= n; ++cell) {
    const int ia = site_index_a(cell);
    const int ib = site_index_b(cell);
    h(ia, ib) += params.t1;
    h(ib, ia) += params.t1;
    h(ib, ib) += Complex(0.0, -gamma[cell - 1]);
    for (int step : {-1, +1}) {
      int m = cell + step;
      if (bc == BoundaryCondition::Ring) {
        m = (m - 1 + n) % n + 1;
      } else if (m < 1 || m > n) {
        continue;
      }
      const int ja = site_index_a(m);
      const int jb = site_index_b(m);
      const Complex a_hop = (step == -1) ? a_hop_left : -a_hop_left;
      h(ia, ja) += a_hop;
      h(ib, jb) += -a_hop;  // sign of the chiral hop is reversed on B
      h(ia, jb) += cross_hop;
      h(ib, ja) += cross_hop;
    }
  }
  return {std::move(h), bc, params};
}

Eigen::Matrix2cd bloch_matrix(const LatticeParams& params, double k) {
  params.validate();
  if (params.loss.kind != LossKind::Uniform)
    throw std::invalid_argument("bloch_matrix: loss profile must be uniform");
  const double diag = params.t2 * std::sin(k);
  const double off = params.t1 + params.t2 * std::cos(k);
  Eigen::Matrix2cd m;
  m << Complex(diag, 0.0), Complex(off, 0.0),
       Complex(off, 0.0), Complex(-diag, -params.loss.gamma);
  return m;
}

}  // namespace edgeburst
