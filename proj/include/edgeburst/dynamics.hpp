#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "edgeburst/model.hpp"
#include "edgeburst/spectral.hpp"

namespace edgeburst {

// Walker amplitudes plus the running per-cell decay integrals
// accumulated_n(t) = 2 gamma_n int_0^t |psi_n^B|^2. Probability bookkeeping
// holds along any trajectory: |amps|^2 + sum_n accumulated_n = 1.
struct WalkerState {
  double t = 0.0;
  Eigen::VectorXcd amps;        // 2N, interleaved (A, B) per cell
  Eigen::VectorXd accumulated;  // N
};

// psi_n^A(0) = delta_{n,S}, psi_n^B(0) = 0.
struct InitialCondition {
  int start_cell = 1;
};

struct IntegratorConfig {
  double dt = 0.0;  // <= 0 resolves to 0.01 / max(1, max_n gamma_n)
  double t_max = 1e4;
  double eps_stop = 1e-10;  // terminate when |amps|^2 drops below this
};

double default_time_step(const LatticeParams& params);

// Total decay probability through each lossy site,
//   P_n = 2 gamma_n int_0^inf |psi_n^B(t)|^2 dt,  sum_n P_n = 1.
// residual is the probability still in flight at termination.
struct DecayDistribution {
  Eigen::VectorXd p;  // length N
  int start_cell = 1;
  double residual = 0.0;
};

// t_max was reached with |amps|^2 still above eps_stop; carries the partial
// distribution (near-dark state or too-small t_max).
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(std::string msg, DecayDistribution partial)
      : std::runtime_error(std::move(msg)), partial(std::move(partial)) {}
  DecayDistribution partial;
};

// The closed-form evaluation lost too much precision (nearly singular
// displacement equation; residual conservation defect above tolerance).
// Callers should fall back to decay_distribution_ode.
class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(std::string msg, double estimate)
      : std::runtime_error(std::move(msg)), estimate(estimate) {}
  double estimate;
};

// An eigenvalue sits on (or numerically at) the real axis, so the infinite-
// time decay integral diverges.
class NonDecayingMode : public std::runtime_error {
 public:
  NonDecayingMode(std::string msg, double max_im)
      : std::runtime_error(std::move(msg)), max_im(max_im) {}
  double max_im;
};

WalkerState initial_state(const LatticeParams& params, InitialCondition init);

// One classical RK4 step of d(psi)/dt = -i H psi with the decay integrals
// advanced through the same stages (dP_n/dt = 2 gamma_n |psi_n^B|^2), so the
// accumulated probabilities carry the integrator's full order.
WalkerState evolve_step(const Hamiltonian& h, const WalkerState& state, double dt);

// Integrates the open-boundary walk from psi_S^A = 1 until |amps|^2 <
// eps_stop or t >= t_max. Requires strictly positive loss rates.
DecayDistribution decay_distribution_ode(const LatticeParams& params,
                                         InitialCondition init,
                                         IntegratorConfig cfg = {});

// Evaluates the P_n integrals in closed form from the spectral decomposition:
// with psi(0) = sum_j c_j v_j over right eigenpairs (E_j, v_j),
//   P_n = 2 gamma_n sum_{j,k} c_j conj(c_k) v_{j,nB} conj(v_{k,nB})
//                    / (i (E_j - conj(E_k))),
// valid when every Im E_j < 0. The sum is evaluated through the unitary
// Schur form of H rather than the eigenvector basis, which keeps it accurate
// deep in the skin-effect regime where the eigenvector matrix condition
// number grows exponentially with N. Independent of the ODE path; the two
// serve as each other's oracles.
DecayDistribution decay_distribution_spectral(const LatticeParams& params,
                                              InitialCondition init,
                                              const Spectrum& spec);

}  // namespace edgeburst
