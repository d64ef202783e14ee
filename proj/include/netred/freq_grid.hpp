#pragma once

#include <vector>

namespace netred {

/// Log-spaced frequencies on [omega_min, eta].
///
/// The band (-j eta, +j eta) is sampled on its positive half only: every
/// system here has real coefficients, so the negative half is the conjugate.
/// omega_min > 0 keeps the grid off s = 0, where f(s) = 1/s has its pole.
struct FreqGrid {
  double eta = 10.0;
  double omega_min = 1e-3;
  std::vector<double> points;

  static FreqGrid log_spaced(double omega_min, double eta, int size);
};

}  // namespace netred
