#include "edgeburst/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace edgeburst {

namespace {

// A = -iH in padded row-major band storage. The interleaved site ordering
// makes H banded with bandwidth 3, so each row is a fixed 7-tap stencil;
// ring corner terms and anything else off the band go to an explicit entry
// list. Split real/imaginary arrays keep the loops free of __muldc3 calls,
// and the state vectors carry kBand zero-padding on both ends so the
// stencil needs no boundary branches.
struct Generator {
  static constexpr int kBand = 3;
  static constexpr int kTaps = 2 * kBand + 1;
  int dim = 0;
  std::vector<double> band_re, band_im;  // kTaps values per row
  struct Entry {
    int row, col;
    double re, im;
  };
  std::vector<Entry> extras;

  explicit Generator(const Eigen::MatrixXcd& h) : dim(static_cast<int>(h.rows())) {
    band_re.assign(static_cast<std::size_t>(kTaps) * dim, 0.0);
    band_im.assign(static_cast<std::size_t>(kTaps) * dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (h(i, j) == 0.0) continue;
        const Complex a = Complex(0.0, -1.0) * h(i, j);
        if (std::abs(j - i) <= kBand) {
          band_re[kTaps * i + (j - i + kBand)] = a.real();
          band_im[kTaps * i + (j - i + kBand)] = a.imag();
        } else {
          extras.push_back({i, j, a.real(), a.imag()});
        }
      }
    }
  }

  // x and y point at the first logical element of padded arrays.
  void apply(const double* __restrict xr, const double* __restrict xi,
             double* __restrict yr, double* __restrict yi) const {
    const double* __restrict br = band_re.data();
    const double* __restrict bi = band_im.data();
    for (int i = 0; i < dim; ++i) {
      double sr = 0.0, si = 0.0;
      const double* r = br + kTaps * i;
      const double* m = bi + kTaps * i;
      for (int tap = 0; tap < kTaps; ++tap) {
        const double zr = xr[i + tap - kBand], zi = xi[i + tap - kBand];
        sr += r[tap] * zr - m[tap] * zi;
        si += r[tap] * zi + m[tap] * zr;
      }
      yr[i] = sr;
      yi[i] = si;
    }
    for (const Entry& e : extras) {
      yr[e.row] += e.re * xr[e.col] - e.im * xi[e.col];
      yi[e.row] += e.re * xi[e.col] + e.im * xr[e.col];
    }
  }
};

// Stage storage with kBand zero-padded ends on every amplitude array.
struct Rk4Workspace {
  static constexpr int kPad = Generator::kBand;
  int dim;
  std::vector<double> buf;
  double *pr, *pi, *yr, *yi, *k1r, *k1i, *k2r, *k2i, *k3r, *k3i, *k4r, *k4i;
  std::vector<double> l1, l2, l3, l4;  // decay-rate stages

  Rk4Workspace(int dim_, int n_cells)
      : dim(dim_), buf(static_cast<std::size_t>(12) * (dim_ + 2 * kPad), 0.0),
        l1(n_cells), l2(n_cells), l3(n_cells), l4(n_cells) {
    double* base = buf.data() + kPad;
    const int stride = dim + 2 * kPad;
    double** slots[] = {&pr, &pi, &yr, &yi, &k1r, &k1i,
                        &k2r, &k2i, &k3r, &k3i, &k4r, &k4i};
    for (int s = 0; s < 12; ++s) *slots[s] = base + s * stride;
  }

  void load(const Eigen::VectorXcd& psi) {
    for (int q = 0; q < dim; ++q) {
      pr[q] = psi[q].real();
      pi[q] = psi[q].imag();
    }
  }

  void store(Eigen::VectorXcd& psi) const {
    for (int q = 0; q < dim; ++q) psi[q] = Complex(pr[q], pi[q]);
  }

  double norm2() const {
    double s = 0.0;
    for (int q = 0; q < dim; ++q) s += pr[q] * pr[q] + pi[q] * pi[q];
    return s;
  }
};

void decay_rates(const std::vector<double>& gamma, const double* xr,
                 const double* xi, std::vector<double>& out) {
  const int n = static_cast<int>(gamma.size());
  for (int cell = 0; cell < n; ++cell) {
    const double br = xr[2 * cell + 1], bi = xi[2 * cell + 1];
    out[cell] = 2.0 * gamma[cell] * (br * br + bi * bi);
  }
}

// One classical RK4 step over amplitudes and decay accumulators together.
void rk4_step(const Generator& a, const std::vector<double>& gamma, double dt,
              Rk4Workspace& w, Eigen::VectorXd& acc) {
  const int m = a.dim;
  a.apply(w.pr, w.pi, w.k1r, w.k1i);
  decay_rates(gamma, w.pr, w.pi, w.l1);
  for (int q = 0; q < m; ++q) {
    w.yr[q] = w.pr[q] + 0.5 * dt * w.k1r[q];
    w.yi[q] = w.pi[q] + 0.5 * dt * w.k1i[q];
  }
  a.apply(w.yr, w.yi, w.k2r, w.k2i);
  decay_rates(gamma, w.yr, w.yi, w.l2);
  for (int q = 0; q < m; ++q) {
    w.yr[q] = w.pr[q] + 0.5 * dt * w.k2r[q];
    w.yi[q] = w.pi[q] + 0.5 * dt * w.k2i[q];
  }
  a.apply(w.yr, w.yi, w.k3r, w.k3i);
  decay_rates(gamma, w.yr, w.yi, w.l3);
  for (int q = 0; q < m; ++q) {
    w.yr[q] = w.pr[q] + dt * w.k3r[q];
    w.yi[q] = w.pi[q] + dt * w.k3i[q];
  }
  a.apply(w.yr, w.yi, w.k4r, w.k4i);
  decay_rates(gamma, w.yr, w.yi, w.l4);

  const double wdt = dt / 6.0;
  for (int q = 0; q < m; ++q) {
    w.pr[q] += wdt * (w.k1r[q] + 2.0 * w.k2r[q] + 2.0 * w.k3r[q] + w.k4r[q]);
    w.pi[q] += wdt * (w.k1i[q] + 2.0 * w.k2i[q] + 2.0 * w.k3i[q] + w.k4i[q]);
  }
  const int n = static_cast<int>(acc.size());
  for (int cell = 0; cell < n; ++cell)
    acc[cell] += wdt * (w.l1[cell] + 2.0 * w.l2[cell] + 2.0 * w.l3[cell] + w.l4[cell]);
}

void check_integrator_config(const IntegratorConfig& cfg) {
  if (!(cfg.t_max > 0.0))
    throw std::invalid_argument("integrator: t_max must be > 0");
  if (!(cfg.eps_stop > 0.0) || !(cfg.eps_stop < 1.0))
    throw std::invalid_argument("integrator: eps_stop must be in (0, 1)");
}

void check_positive_loss(const std::vector<double>& gamma) {
  for (double g : gamma)
    if (!(g > 0.0))
      throw std::invalid_argument(
          "decay distribution: loss rates must be strictly positive");
}

int checked_start(const LatticeParams& params, InitialCondition init) {
  if (init.start_cell < 1 || init.start_cell > params.n_cells)
    throw std::invalid_argument("initial condition: start cell out of range");
  return init.start_cell;
}

}  // namespace

double default_time_step(const LatticeParams& params) {
  const auto gamma = params.loss_values();
  const double gmax = *std::max_element(gamma.begin(), gamma.end());
  return 0.01 / std::max(1.0, gmax);
}

WalkerState initial_state(const LatticeParams& params, InitialCondition init) {
  params.validate();
  const int s = checked_start(params, init);
  WalkerState state;
  state.amps = Eigen::VectorXcd::Zero(2 * params.n_cells);
  state.amps[site_index_a(s)] = 1.0;
  state.accumulated = Eigen::VectorXd::Zero(params.n_cells);
  return state;
}

WalkerState evolve_step(const Hamiltonian& h, const WalkerState& state, double dt) {
  if (state.amps.size() != h.dim() || state.accumulated.size() != h.cells())
    throw std::invalid_argument("evolve_step: state and Hamiltonian dimensions disagree");
  if (!(dt >= 0.0)) throw std::invalid_argument("evolve_step: dt must be >= 0");
  WalkerState next = state;
  if (dt == 0.0) return next;
  const Generator a(h.entries);
  const auto gamma = h.params.loss.values(h.cells());
  Rk4Workspace w(h.dim(), h.cells());
  w.load(next.amps);
  rk4_step(a, gamma, dt, w, next.accumulated);
  w.store(next.amps);
  next.t = state.t + dt;
  return next;
}

DecayDistribution decay_distribution_ode(const LatticeParams& params,
                                         InitialCondition init,
                                         IntegratorConfig cfg) {
  const auto gamma = params.loss_values();
  check_positive_loss(gamma);
  const int s = checked_start(params, init);
  check_integrator_config(cfg);
  const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(params);

  const Hamiltonian h = build_hamiltonian(params, BoundaryCondition::Open);
  const Generator a(h.entries);
  Rk4Workspace w(h.dim(), params.n_cells);
  w.pr[site_index_a(s)] = 1.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(params.n_cells);

  double norm2 = 1.0;
  double t = 0.0;
  for (long step = 1; norm2 >= cfg.eps_stop && t < cfg.t_max; ++step) {
    rk4_step(a, gamma, dt, w, acc);
    t = step * dt;
    norm2 = w.norm2();
  }

  DecayDistribution dist{std::move(acc), s, norm2};
  if (norm2 >= cfg.eps_stop)
    throw NonConvergence("decay_distribution_ode: t_max reached with residual " +
                             std::to_string(norm2),
                         std::move(dist));
  return dist;
}

DecayDistribution decay_distribution_spectral(const LatticeParams& params,
                                              InitialCondition init,
                                              const Spectrum& spec) {
  const auto gamma = params.loss_values();
  const int s = checked_start(params, init);
  if (spec.dim() != 2 * params.n_cells)
    throw std::invalid_argument("decay_distribution_spectral: spectrum dimension mismatch");
  if (spec.bc != BoundaryCondition::Open)
    throw std::invalid_argument("decay_distribution_spectral: walk is defined on the open lattice");

  const double max_im = spec.eigenvalues.imag().maxCoeff();
  if (max_im >= -1e-12)
    throw NonDecayingMode(
        "decay_distribution_spectral: eigenvalue with Im E >= -1e-12, "
        "decay integral diverges",
        max_im);

  // X = int_0^inf e^{-iHt} psi0 psi0^dag e^{iH^dag t} dt solves
  //   H X - X H^dag = -i psi0 psi0^dag,
  // and P_n = 2 gamma_n X[(n,B),(n,B)]. With H = U T U* the triangular
  // system T Y - Y T^dag = -i b b^dag (b = U* psi0) is solved by backward
  // substitution; divisors are T_ii - conj(T_jj) = E_i - conj(E_j).
  const int dim = 2 * params.n_cells;
  const Hamiltonian h = build_hamiltonian(params, BoundaryCondition::Open);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(h.entries, true);
  if (schur.info() != Eigen::Success)
    throw NoConvergence("decay_distribution_spectral: Schur iteration did not converge");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& u = schur.matrixU();

  Eigen::VectorXcd b = u.adjoint().col(site_index_a(s));  // U* psi0
  Eigen::MatrixXcd y(dim, dim);
  double min_sep = std::numeric_limits<double>::infinity();
  for (int j = dim - 1; j >= 0; --j) {
    for (int i = dim - 1; i >= 0; --i) {
      Complex rhs = Complex(0.0, -1.0) * b[i] * std::conj(b[j]);
      const int ki = dim - 1 - i;
      if (ki > 0)
        rhs -= t.row(i).tail(ki).cwiseProduct(y.col(j).tail(ki).transpose()).sum();
      const int kj = dim - 1 - j;
      if (kj > 0)
        rhs += y.row(i).tail(kj).cwiseProduct(t.row(j).tail(kj).conjugate()).sum();
      const Complex div = t(i, i) - std::conj(t(j, j));
      min_sep = std::min(min_sep, std::abs(div));
      y(i, j) = rhs / div;
    }
  }

  const Eigen::MatrixXcd z = u * y;
  const Eigen::VectorXd x_diag =
      (z.array() * u.conjugate().array()).rowwise().sum().real().matrix();

  Eigen::VectorXd p(params.n_cells);
  for (int cell = 1; cell <= params.n_cells; ++cell)
    p[cell - 1] = 2.0 * gamma[cell - 1] * x_diag[site_index_b(cell)];

  const double defect = std::abs(1.0 - p.sum());
  if (defect > 1e-6 || p.minCoeff() < -1e-9)
    throw IllConditioned(
        "decay_distribution_spectral: conservation defect " +
            std::to_string(defect) + " with eigenvalue pair separation " +
            std::to_string(min_sep) + "; fall back to decay_distribution_ode",
        defect);
  p = p.cwiseMax(0.0);

  return {std::move(p), s, defect};
}

}  // namespace edgeburst
