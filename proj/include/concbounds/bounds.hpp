#pragma once

// Radius calculators for norm concentration of sub-Gaussian vectors and
// matrices. Every radius r satisfies P(|X| <= r) >= 1 - delta for a
// sub-Gaussian X with parameter sigma (variance proxy sigma^2); the
// constant-form methods have r^2 = sigma^2 (C1 * dim + C2 * log(1/delta)).
// All logarithms are natural.

#include <optional>
#include <string_view>
#include <vector>

namespace concbounds::bounds {

enum class Method { scalar, eps_net, thm2, thm3, hkz, matrix_thm4 };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// True for methods parameterized by eps in (0, 1).
bool uses_eps(Method method);

struct BoundParams {
  int n = 1;                   // vector dimension, or matrix column count
  std::optional<int> m;        // matrix row count
  double sigma = 1.0;          // sub-Gaussian parameter
  double delta = 0.05;         // failure probability
  std::optional<double> eps;   // for eps-parameterized methods

  /// Throws std::domain_error on any out-of-range field.
  void validate() const;
};

struct BoundResult {
  Method method = Method::thm3;
  double radius = 0.0;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> eps_used;
};

struct Constants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// C1 = 2 log(1 + 2/(1-eps)) / eps^2, C2 = 2 / eps^2 (union bound over an eps-net).
Constants eps_net_constants(double eps);

/// C1 = log(1/(1-eps^2)) / eps^2, C2 = 2 / eps^2 (averaged MGF).
Constants amgf_constants(double eps);

BoundResult radius_scalar(const BoundParams& p);
BoundResult radius_eps_net(const BoundParams& p);
BoundResult radius_thm2(const BoundParams& p);
BoundResult radius_thm3(const BoundParams& p);
BoundResult radius_hkz(const BoundParams& p);
BoundResult radius_matrix_thm4(const BoundParams& p);

/// min(1, (1-eps^2)^{-n/2} exp(-eps^2 r^2 / (2 sigma^2))); inverse of radius_thm2.
double tail_delta_thm2(int n, double sigma, double eps, double r);

/// min(1, (1-eps^2)^{-(m+n)/2} exp(-eps^4 r^2 / (2 sigma^2))); inverse of
/// radius_matrix_thm4.
double tail_delta_matrix(int m, int n, double sigma, double eps, double r);

struct EpsOptimum {
  double eps = 0.5;
  double radius = 0.0;
  bool unimodal = true;  // false: the pre-scan saw a second dip and the grid argmin was kept
};

EpsOptimum optimize_eps_thm2(int n, double sigma, double delta);
EpsOptimum optimize_eps_matrix(int m, int n, double sigma, double delta);
EpsOptimum optimize_eps_net(int n, double sigma, double delta);

/// Dispatches on method; an eps-parameterized method without p.eps uses the
/// optimized eps.
BoundResult evaluate(Method method, const BoundParams& p);

/// Vector methods in a stable order: scalar (n = 1 only), eps_net at p.eps or
/// optimized, thm2 at optimized eps, thm3, hkz.
std::vector<BoundResult> compare_methods(const BoundParams& p);

/// f(eps) = n eps^2 / (2 (1 - eps^2)) + s^2 / (2 eps^2) with s = sigma * t:
/// the log-MGF exponent after log(1 - eps^2) >= eps^2 / (eps^2 - 1).
double tuned_exponent(int n, double sigma_t, double eps);

struct ExponentOptimum {
  double eps_star = 0.0;  // sqrt(s / (s + sqrt n))
  double minimum = 0.0;   // (sqrt n + s)^2 / 2 - n / 2
};

ExponentOptimum tuned_exponent_optimum(int n, double sigma_t);

} // namespace concbounds::bounds
