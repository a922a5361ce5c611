#pragma once

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "concbounds/parallel.hpp"

namespace concbounds {

/// Fills `out` with a point uniform on the unit sphere of its length by
/// normalizing a standard Gaussian vector. Returns the Gaussian norm.
template <class Derived>
double sample_unit_sphere(Rng& rng, Eigen::MatrixBase<Derived>& out) {
  std::normal_distribution<double> normal;
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal(rng);
    norm = out.norm();
  } while (norm == 0.0);
  out /= norm;
  return norm;
}

} // namespace concbounds
