#include "concbounds/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "concbounds/errors.hpp"
#include "quadrature.hpp"

namespace concbounds::specfun {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kBelowOne = 0.99999999999999989;  // nextafter(1.0, 0.0)

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

} // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  require(std::isfinite(nu) && nu >= -0.5, "BesselOrder: nu must be >= -1/2");
}

BesselOrder BesselOrder::for_dimension(int n) {
  require(n >= 1, "BesselOrder: dimension must be >= 1");
  return BesselOrder(0.5 * n - 1.0);
}

RatioResult bessel_ratio(BesselOrder order, double z, const RatioOptions& options) {
  require(std::isfinite(z) && z >= 0.0, "bessel_ratio: z must be finite and >= 0");
  if (z == 0.0) return {0.0, 0, true};

  // Modified Lentz on 1 / (b_1 + 1 / (b_2 + ...)), b_k = 2(nu + k) / z.
  const double nu = order.value();
  double f = kTiny, c = f, d = 0.0, delta = 0.0;
  for (int k = 1; k <= options.max_iterations; ++k) {
    const double b = 2.0 * (nu + k) / z;
    d = b + d;
    if (d == 0.0) d = kTiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < options.tolerance) {
      // Rounding can land a hair above 1 once the ratio saturates.
      return {std::min(f, kBelowOne), k, true};
    }
  }
  throw NumericalError("bessel_ratio: continued fraction did not converge (nu=" +
                           std::to_string(nu) + ", z=" + std::to_string(z) + ")",
                       options.max_iterations, std::abs(delta - 1.0));
}

double amos_lower_bound(int n, double z) {
  require(n >= 1, "amos_lower_bound: n must be >= 1");
  require(std::isfinite(z) && z > 0.0, "amos_lower_bound: z must be > 0");
  const double a = 0.5 * n / z;
  // sqrt(1 + a^2) - a without the cancellation.
  return 1.0 / (std::hypot(1.0, a) + a);
}

double big_g(int n, double z, double quadrature_tol) {
  require(n >= 1, "big_g: n must be >= 1");
  require(std::isfinite(z) && z >= 0.0, "big_g: z must be finite and >= 0");
  require(quadrature_tol > 0.0, "big_g: tolerance must be > 0");
  const double a = 0.5 * n;
  // g(y) = y / (a + sqrt(y^2 + a^2)); the same function, finite at y = 0.
  auto integrand = [a](double y) { return y / (a + std::hypot(y, a)); };
  detail::AdaptiveSimpson<decltype(integrand)> simpson(integrand, quadrature_tol);
  return simpson.integrate(0.0, z);
}

double regularized_lower_incomplete_gamma(double a, double x) {
  require(std::isfinite(a) && a > 0.0, "incomplete gamma: a must be > 0");
  require(!std::isnan(x) && x >= 0.0, "incomplete gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;

  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);

  if (x < a + 1.0) {
    double ap = a, term = 1.0 / a, sum = term;
    for (int k = 1; k <= kMaxIter; ++k) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) {
        return std::min(1.0, sum * std::exp(log_prefactor));
      }
    }
    throw NumericalError("incomplete gamma: series did not converge", kMaxIter, term / sum);
  }

  // Upper tail Q(a, x) by Lentz continued fraction.
  double b = x + 1.0 - a, c = 1.0 / kTiny, d = 1.0 / b, h = d, delta = 0.0;
  for (int k = 1; k <= kMaxIter; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::max(0.0, 1.0 - std::exp(log_prefactor) * h);
    }
  }
  throw NumericalError("incomplete gamma: continued fraction did not converge", kMaxIter,
                       std::abs(delta - 1.0));
}

double chi_square_cdf(int n, double x) {
  require(n >= 1, "chi_square_cdf: n must be >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_lower_incomplete_gamma(0.5 * n, 0.5 * x);
}

double chi_square_quantile(int n, double p) {
  require(n >= 1, "chi_square_quantile: n must be >= 1");
  require(p > 0.0 && p < 1.0, "chi_square_quantile: p must be in (0, 1)");

  double lo = 0.0;
  double hi = n + 20.0 * std::sqrt(static_cast<double>(n)) + 40.0 * std::log(1.0 / (1.0 - p));
  int expansions = 0;
  while (chi_square_cdf(n, hi) < p) {
    if (++expansions > 64) {
      throw NumericalError("chi_square_quantile: could not bracket the quantile", expansions, hi);
    }
    lo = hi;
    hi *= 2.0;
  }
  constexpr int kMaxBisections = 400;
  for (int k = 0; k < kMaxBisections; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (chi_square_cdf(n, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace concbounds::specfun
