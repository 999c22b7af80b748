#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgeburst/dynamics.hpp"
#include "edgeburst/metrics.hpp"

namespace edgeburst {

// One fully resolved run, as assembled from flags / config file / defaults.
struct RunConfig {
  double t1 = 0.3;
  double t2 = 0.5;
  int n = 60;
  int s = 50;
  std::string profile = "uniform";  // uniform | linear | random
  double gamma = 1.0;
  double gamma_max = 1.0;
  std::uint64_t seed = 0;
  std::string bc = "open";  // open | ring
  double dt = 0.0;          // 0 resolves to the loss-scaled default
  double t_max = 1e4;
  double eps_stop = 1e-10;
  std::string out_dir = ".";
  int jobs = 1;
};

LatticeParams lattice_params(const RunConfig& cfg, bool allow_lossless);
BoundaryCondition boundary_condition(const RunConfig& cfg);
IntegratorConfig integrator_config(const RunConfig& cfg);

// Runs the open-lattice walk and writes decay.csv (n,gamma_n,P_n) and
// metrics.json (edge-burst metrics, residual, resolved config). On
// non-convergence writes partial outputs with a marker field and returns
// nonzero.
int cmd_simulate(const RunConfig& cfg);

// Diagonalizes both boundary conditions and writes spectrum_open.csv,
// spectrum_ring.csv (re,im) and spectral.json (imaginary gaps, Hausdorff
// distance, open-lattice mean displacement).
int cmd_spectrum(const RunConfig& cfg);

// Gamma sweep: one simulate+spectrum evaluation per value.
struct SweepSpec {
  std::vector<double> values;  // nonempty, strictly increasing
  RunConfig base;
};

// Writes sweep.csv (gamma,mean_A,mean_B,p1_over_pmin,p1_over_ps,
// edge_fraction) and sweep_summary.json. Points run independently over
// base.jobs threads; rows are emitted in input order and a failing point
// gets NaN fields plus a warnings entry.
int cmd_sweep(const SweepSpec& spec);

}  // namespace edgeburst
