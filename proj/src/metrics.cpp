#include "edgeburst/metrics.hpp"

namespace edgeburst {

EdgeBurstMetrics edge_burst_metrics(const DecayDistribution& dist) {
  const int s = dist.start_cell;
  if (s < 2)
    throw std::invalid_argument("edge_burst_metrics: start cell must be >= 2");
  if (dist.p.size() < s)
    throw std::invalid_argument("edge_burst_metrics: distribution shorter than start cell");

  int pmin_index = 1;
  double pmin = dist.p[0];
  for (int n = 2; n <= s; ++n) {
    if (dist.p[n - 1] < pmin) {
      pmin = dist.p[n - 1];
      pmin_index = n;
    }
  }
  if (pmin <= 1e-15)
    throw DegenerateDistribution("edge_burst_metrics: P_min vanishes, ratio undefined");

  EdgeBurstMetrics m;
  m.p1_over_pmin = dist.p[0] / pmin;
  m.p1_over_ps = dist.p[0] / dist.p[s - 1];
  m.edge_fraction = dist.p[0] / dist.p.sum();  // = P_1 for a normalized P
  m.pmin_index = pmin_index;
  return m;
}

}  // namespace edgeburst
