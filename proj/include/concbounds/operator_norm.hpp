#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace concbounds::mc {

struct PowerIterationOptions {
  double tolerance = 1e-12;  // on ||B x - theta x|| / theta
  int max_iterations = 10000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;  // start vector
};

/// Largest singular value of `a`, by power iteration on the smaller of A^T A
/// and A A^T from a seeded Gaussian start vector. Stops once the eigen-residual
/// of the Rayleigh quotient is below tolerance * quotient, which bounds the
/// relative eigenvalue error by the same tolerance. Throws NumericalError
/// (carrying the last residual) if the iteration cap is hit.
double operator_norm(const Eigen::MatrixXd& a, const PowerIterationOptions& options = {});

} // namespace concbounds::mc
