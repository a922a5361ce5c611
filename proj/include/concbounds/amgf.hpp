#pragma once

// The averaged moment generating function (AMGF).
//
// For a direction l uniform on the unit sphere S^{n-1}, the energy function
//   phi_n(z) = E_l exp(z <l, eta>),  |eta| = 1,
// depends on z = |lambda X| only. phi_1 = cosh, and for n >= 2
//   d/dz log phi_n(z) = I_{n/2}(z) / I_{n/2-1}(z),
// so log phi_n is evaluated as the integral of a bounded Bessel ratio and
// never overflows, even where phi_n itself does.

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "concbounds/parallel.hpp"

namespace concbounds::amgf {

struct PhiQuery {
  PhiQuery(int n, double z);

  int n;     // ambient dimension
  double z;  // |lambda X|
};

enum class PhiMethod { closed_form_hyperbolic, ratio_quadrature, series };

const char* to_string(PhiMethod method);

struct LogPhiResult {
  double log_value = 0.0;  // >= 0
  PhiMethod method = PhiMethod::series;
};

/// log phi_n(z) to ~1e-9 relative accuracy for any z >= 0.
LogPhiResult log_phi(const PhiQuery& q);

/// (n/2) log(1 - eps^2) + eps z: a lower bound on log phi_n(z) for every
/// eps in (0, 1).
double lemma1_lower_bound(int n, double z, double eps);

/// ((m+n)/2) log(1 - eps^2) + eps^2 z with z = |lambda A|: a lower bound on
/// the log of the matrix energy function.
double lemma4_lower_bound(int m, int n, double z, double eps);

/// Monte Carlo estimate of a log energy function. `m` is 1 for the vector
/// energy function.
struct EnergyEstimate {
  int m = 1;
  int n = 1;
  double log_estimate = 0.0;
  double std_error = 0.0;  // delta-method SE of the log of the sample mean
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Sphere-average estimate of log phi_n(z). Deterministic in (seed, samples).
EnergyEstimate mc_phi(int n, double z, std::size_t samples, std::uint64_t seed,
                      const ExecutionOptions& exec = {});

/// Estimate of log E_{u,v} exp(lambda u^T A v), u and v uniform on the unit
/// spheres of R^m and R^n. A and its transpose give bit-identical results.
EnergyEstimate mc_matrix_energy(const Eigen::MatrixXd& a, double lambda, std::size_t samples,
                                std::uint64_t seed, const ExecutionOptions& exec = {});

} // namespace concbounds::amgf
