#pragma once

// Scalar special functions behind the averaged MGF: modified-Bessel ratios,
// the Amos lower bound and its integral, and the incomplete-gamma / chi-square
// machinery used as an exact oracle for Gaussian vectors.
//
// All functions are pure. Domain violations throw std::domain_error;
// exhausted iteration budgets throw NumericalError.

namespace concbounds::specfun {

/// Order of I_nu. Only values nu >= -1/2 are meaningful here.
class BesselOrder {
public:
  explicit BesselOrder(double nu);

  /// I_{n/2} / I_{n/2 - 1}: the ratio that drives log phi_n.
  static BesselOrder for_dimension(int n);

  double value() const noexcept { return nu_; }

private:
  double nu_;
};

struct RatioResult {
  double value = 0.0;  // in [0, 1)
  int iterations = 0;
  bool converged = false;
};

struct RatioOptions {
  double tolerance = 1e-14;
  int max_iterations = 10000;
};

/// I_{nu+1}(z) / I_nu(z) from the Gauss continued fraction
///   z / (2(nu+1) + z^2 / (2(nu+2) + z^2 / ...)),
/// evaluated with the modified Lentz algorithm. Exactly 0 at z = 0.
RatioResult bessel_ratio(BesselOrder nu, double z, const RatioOptions& options = {});

/// g(z) = sqrt(1 + (n/2z)^2) - n/2z, the Amos lower bound on
/// I_{n/2}(z) / I_{n/2-1}(z). Requires z > 0.
double amos_lower_bound(int n, double z);

/// G(z) = integral of g over [0, z], by adaptive Simpson to an absolute
/// tolerance.
double big_g(int n, double z, double quadrature_tol = 1e-10);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_incomplete_gamma(double a, double x);

/// CDF of the chi-square law with n degrees of freedom.
double chi_square_cdf(int n, double x);

/// q such that chi_square_cdf(n, q) = p, by bisection.
double chi_square_quantile(int n, double p);

} // namespace concbounds::specfun
