#include "edgeburst/run.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace edgeburst {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

ordered_json config_json(const RunConfig& cfg, const LatticeParams& params,
                         double resolved_dt) {
  ordered_json j;
  j["t1"] = cfg.t1;
  j["t2"] = cfg.t2;
  j["n"] = cfg.n;
  j["s"] = cfg.s;
  j["profile"] = cfg.profile;
  j["gamma"] = cfg.gamma;
  j["gamma_max"] = cfg.gamma_max;
  j["seed"] = cfg.seed;
  j["bc"] = cfg.bc;
  j["dt"] = resolved_dt;
  j["t_max"] = cfg.t_max;
  j["eps_stop"] = cfg.eps_stop;
  j["out"] = cfg.out_dir;
  j["jobs"] = cfg.jobs;
  if (params.loss.kind == LossKind::Random)
    j["gamma_n"] = params.loss.values(params.n_cells);
  return j;
}

std::string decay_csv(const LatticeParams& params, const Eigen::VectorXd& p) {
  const auto gamma = params.loss.values(params.n_cells);
  std::string csv = "n,gamma_n,P_n\n";
  for (int n = 1; n <= params.n_cells; ++n)
    csv += std::to_string(n) + "," + fmt(gamma[n - 1]) + "," + fmt(p[n - 1]) + "\n";
  return csv;
}

std::string spectrum_csv(const Spectrum& spec) {
  std::string csv = "re,im\n";
  for (int j = 0; j < spec.dim(); ++j)
    csv += fmt(spec.eigenvalues(j).real()) + "," + fmt(spec.eigenvalues(j).imag()) + "\n";
  return csv;
}

}  // namespace

LatticeParams lattice_params(const RunConfig& cfg, bool allow_lossless) {
  LatticeParams params;
  params.t1 = cfg.t1;
  params.t2 = cfg.t2;
  params.n_cells = cfg.n;
  params.allow_lossless = allow_lossless;
  if (cfg.profile == "uniform") {
    params.loss = LossProfile::uniform(cfg.gamma);
  } else if (cfg.profile == "linear") {
    params.loss = LossProfile::linear(cfg.gamma);
  } else if (cfg.profile == "random") {
    params.loss = LossProfile::random(cfg.gamma_max, cfg.seed);
  } else {
    throw std::invalid_argument("config: profile must be uniform, linear or random");
  }
  params.validate();
  return params;
}

BoundaryCondition boundary_condition(const RunConfig& cfg) {
  if (cfg.bc == "open") return BoundaryCondition::Open;
  if (cfg.bc == "ring") return BoundaryCondition::Ring;
  throw std::invalid_argument("config: bc must be open or ring");
}

IntegratorConfig integrator_config(const RunConfig& cfg) {
  return {cfg.dt, cfg.t_max, cfg.eps_stop};
}

int cmd_simulate(const RunConfig& cfg) {
  const LatticeParams params = lattice_params(cfg, false);
  if (boundary_condition(cfg) != BoundaryCondition::Open)
    throw std::invalid_argument("simulate: the walk is defined on the open lattice");
  if (cfg.s < 1 || cfg.s > cfg.n)
    throw std::invalid_argument("simulate: s must be in [1, n]");
  const auto dir = ensure_out_dir(cfg);
  IntegratorConfig icfg = integrator_config(cfg);
  if (icfg.dt <= 0.0) icfg.dt = default_time_step(params);

  DecayDistribution dist;
  bool converged = true;
  try {
    dist = decay_distribution_ode(params, {cfg.s}, icfg);
  } catch (const NonConvergence& e) {
    dist = e.partial;
    converged = false;
  }

  write_file(dir / "decay.csv", decay_csv(params, dist.p));

  ordered_json j;
  if (!converged) j["partial_output"] = true;
  try {
    const EdgeBurstMetrics m = edge_burst_metrics(dist);
    j["p1_over_pmin"] = m.p1_over_pmin;
    j["p1_over_ps"] = m.p1_over_ps;
    j["edge_fraction"] = m.edge_fraction;
    j["pmin_index"] = m.pmin_index;
  } catch (const std::exception&) {  // S = 1 or degenerate partial output
    j["p1_over_pmin"] = nullptr;
    j["p1_over_ps"] = nullptr;
    j["edge_fraction"] = nullptr;
    j["pmin_index"] = nullptr;
  }
  j["residual"] = dist.residual;
  j["config"] = config_json(cfg, params, icfg.dt);
  write_file(dir / "metrics.json", j.dump(2) + "\n");

  return converged ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg) {
  const LatticeParams params = lattice_params(cfg, true);
  const auto dir = ensure_out_dir(cfg);

  const Spectrum open = eigensystem(build_hamiltonian(params, BoundaryCondition::Open));
  const Spectrum ring = eigensystem(build_hamiltonian(params, BoundaryCondition::Ring));

  write_file(dir / "spectrum_open.csv", spectrum_csv(open));
  write_file(dir / "spectrum_ring.csv", spectrum_csv(ring));

  const DisplacementPair disp = mean_displacement(open);
  ordered_json j;
  j["imaginary_gap_open"] = imaginary_gap(open);
  j["imaginary_gap_ring"] = imaginary_gap(ring);
  j["hausdorff_distance"] = spectra_compare(open, ring);
  j["mean_a_open"] = disp.mean_a;
  j["mean_b_open"] = disp.mean_b;
  write_file(dir / "spectral.json", j.dump(2) + "\n");

  return 0;
}

namespace {

struct SweepRow {
  double gamma = 0.0;
  double mean_a = std::numeric_limits<double>::quiet_NaN();
  double mean_b = std::numeric_limits<double>::quiet_NaN();
  double p1_over_pmin = std::numeric_limits<double>::quiet_NaN();
  double p1_over_ps = std::numeric_limits<double>::quiet_NaN();
  double edge_fraction = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> errors;
};

RunConfig with_gamma(const RunConfig& base, double value) {
  RunConfig cfg = base;
  if (cfg.profile == "random")
    cfg.gamma_max = value;
  else
    cfg.gamma = value;
  return cfg;
}

SweepRow sweep_point(const RunConfig& base, double value) {
  SweepRow row;
  row.gamma = value;
  const RunConfig cfg = with_gamma(base, value);
  try {
    const LatticeParams params = lattice_params(cfg, true);
    const DisplacementPair disp =
        mean_displacement(eigensystem(build_hamiltonian(params, BoundaryCondition::Open)));
    row.mean_a = disp.mean_a;
    row.mean_b = disp.mean_b;
  } catch (const std::exception& e) {
    row.errors.emplace_back(e.what());
  }
  try {
    const LatticeParams params = lattice_params(cfg, false);
    IntegratorConfig icfg = integrator_config(cfg);
    if (icfg.dt <= 0.0) icfg.dt = default_time_step(params);
    const EdgeBurstMetrics m =
        edge_burst_metrics(decay_distribution_ode(params, {cfg.s}, icfg));
    row.p1_over_pmin = m.p1_over_pmin;
    row.p1_over_ps = m.p1_over_ps;
    row.edge_fraction = m.edge_fraction;
  } catch (const std::exception& e) {
    row.errors.emplace_back(e.what());
  }
  return row;
}

}  // namespace

int cmd_sweep(const SweepSpec& spec) {
  if (spec.values.empty())
    throw std::invalid_argument("sweep: needs at least one gamma value");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      throw std::invalid_argument("sweep: gamma values must be strictly increasing");
  if (spec.base.s < 2 || spec.base.s > spec.base.n)
    throw std::invalid_argument("sweep: s must be in [2, n]");
  const auto dir = ensure_out_dir(spec.base);

  std::vector<SweepRow> rows(spec.values.size());
  const int jobs = std::max(1, spec.base.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < spec.values.size();
         i = next.fetch_add(1))
      rows[i] = sweep_point(spec.base, spec.values[i]);
  };
  if (jobs == 1 || spec.values.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::string csv = "gamma,mean_A,mean_B,p1_over_pmin,p1_over_ps,edge_fraction\n";
  ordered_json warnings = ordered_json::array();
  for (const SweepRow& row : rows) {
    csv += fmt(row.gamma) + "," + fmt(row.mean_a) + "," + fmt(row.mean_b) + "," +
           fmt(row.p1_over_pmin) + "," + fmt(row.p1_over_ps) + "," +
           fmt(row.edge_fraction) + "\n";
    for (const std::string& err : row.errors)
      warnings.push_back({{"gamma", row.gamma}, {"error", err}});
  }
  write_file(dir / "sweep.csv", csv);

  ordered_json j;
  j["warnings"] = warnings;
  write_file(dir / "sweep_summary.json", j.dump(2) + "\n");

  return warnings.empty() ? 0 : 1;
}

}  // namespace edgeburst
