#pragma once

#include <stdexcept>

#include "edgeburst/dynamics.hpp"

namespace edgeburst {

// P_min vanished (within 1e-15), so the burst ratio is undefined.
class DegenerateDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge-burst quantifiers of a decay distribution. p1_over_pmin >= 1 always,
// since P_1 belongs to the minimized set {P_1..P_S}; values >> 1 signal an
// edge burst, values ~ 1 its absence.
struct EdgeBurstMetrics {
  double p1_over_pmin = 1.0;  // P_1 / min{P_1..P_S}
  double p1_over_ps = 1.0;    // P_1 / P_S
  double edge_fraction = 0.0; // P_1 / sum_n P_n
  int pmin_index = 1;         // smallest index attaining the minimum
};

// Requires start_cell >= 2. Invariant under rescaling of P by any positive
// constant.
EdgeBurstMetrics edge_burst_metrics(const DecayDistribution& dist);

}  // namespace edgeburst
