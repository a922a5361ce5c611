#include "concbounds/bounds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace concbounds::bounds {

namespace {

constexpr int kPrescanPoints = 1000;
constexpr double kEpsTolerance = 1e-10;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

void require_eps(double eps) {
  require(eps > 0.0 && eps < 1.0, "eps must be in (0, 1)");
}

// -log(1 - eps^2), accurate for small eps.
double neg_log1m_sq(double eps) { return -std::log1p(-eps * eps); }

double log_inv_delta(double delta) { return -std::log(delta); }

double vector_dim(const BoundParams& p) { return p.n; }

double matrix_dim(const BoundParams& p) {
  require(p.m.has_value(), "matrix bound requires m");
  return static_cast<double>(*p.m) + p.n;
}

BoundResult from_constants(Method method, const BoundParams& p, double dim, Constants c,
                           std::optional<double> eps) {
  const double r2 = c.c1 * dim + c.c2 * log_inv_delta(p.delta);
  return {method, p.sigma * std::sqrt(r2), c.c1, c.c2, eps};
}

// Squared radius at sigma = 1 as a function of eps.
double thm2_r2(double dim, double big_l, double eps) {
  return (dim * neg_log1m_sq(eps) + 2.0 * big_l) / (eps * eps);
}

double matrix_r2(double dim, double big_l, double eps) {
  const double e2 = eps * eps;
  return (dim * neg_log1m_sq(eps) + 2.0 * big_l) / (e2 * e2);
}

double eps_net_r2(double dim, double big_l, double eps) {
  return (2.0 * dim * std::log1p(2.0 / (1.0 - eps)) + 2.0 * big_l) / (eps * eps);
}

struct Minimum {
  double x;
  double value;
  bool unimodal;
};

// Minimizes f over (0, 1): a grid pre-scan locates the basin and checks that
// the sampled values fall then rise; golden-section search then refines
// inside the bracket around the grid argmin. Without the fall-then-rise shape
// the grid argmin is returned as is.
template <class F>
Minimum minimize_on_unit_interval(F f) {
  std::array<double, kPrescanPoints> xs{}, fs{};
  int best = 0;
  for (int i = 0; i < kPrescanPoints; ++i) {
    xs[i] = (i + 1.0) / (kPrescanPoints + 1.0);
    fs[i] = f(xs[i]);
    if (fs[i] < fs[best]) best = i;
  }
  bool unimodal = true;
  for (int i = 1; i <= best && unimodal; ++i) unimodal = fs[i] <= fs[i - 1];
  for (int i = best + 1; i < kPrescanPoints && unimodal; ++i) unimodal = fs[i] >= fs[i - 1];
  if (!unimodal) return {xs[best], fs[best], false};

  double lo = best == 0 ? 0.5 * xs[0] : xs[best - 1];
  double hi = best == kPrescanPoints - 1 ? 0.5 * (1.0 + xs[best]) : xs[best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > kEpsTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  Minimum out{0.5 * (lo + hi), 0.0, true};
  out.value = f(out.x);
  if (fs[best] < out.value) {
    out.x = xs[best];
    out.value = fs[best];
  }
  return out;
}

void validate_radius_inputs(int n, double sigma, double delta) {
  BoundParams p;
  p.n = n;
  p.sigma = sigma;
  p.delta = delta;
  p.validate();
}

} // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::scalar: return "scalar";
    case Method::eps_net: return "eps_net";
    case Method::thm2: return "thm2";
    case Method::thm3: return "thm3";
    case Method::hkz: return "hkz";
    case Method::matrix_thm4: return "matrix_thm4";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::scalar, Method::eps_net, Method::thm2, Method::thm3, Method::hkz,
                   Method::matrix_thm4}) {
    if (to_string(m) == name) return m;
  }
  if (name == "thm4" || name == "matrix") return Method::matrix_thm4;
  return std::nullopt;
}

bool uses_eps(Method method) {
  return method == Method::eps_net || method == Method::thm2 || method == Method::matrix_thm4;
}

void BoundParams::validate() const {
  require(n >= 1, "n must be >= 1");
  require(!m || *m >= 1, "m must be >= 1");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be finite and > 0");
  require(delta > 0.0 && delta < 1.0, "delta must be in (0, 1)");
  if (eps) require_eps(*eps);
}

Constants eps_net_constants(double eps) {
  require_eps(eps);
  const double e2 = eps * eps;
  return {2.0 * std::log1p(2.0 / (1.0 - eps)) / e2, 2.0 / e2};
}

Constants amgf_constants(double eps) {
  require_eps(eps);
  const double e2 = eps * eps;
  return {neg_log1m_sq(eps) / e2, 2.0 / e2};
}

BoundResult radius_scalar(const BoundParams& p) {
  p.validate();
  require(p.n == 1, "scalar bound requires n = 1");
  return from_constants(Method::scalar, p, 1.0, {2.0 * std::log(2.0), 2.0}, std::nullopt);
}

BoundResult radius_eps_net(const BoundParams& p) {
  p.validate();
  require(p.eps.has_value(), "eps_net bound requires eps");
  return from_constants(Method::eps_net, p, vector_dim(p), eps_net_constants(*p.eps), p.eps);
}

BoundResult radius_thm2(const BoundParams& p) {
  p.validate();
  require(p.eps.has_value(), "thm2 bound requires eps");
  return from_constants(Method::thm2, p, vector_dim(p), amgf_constants(*p.eps), p.eps);
}

BoundResult radius_thm3(const BoundParams& p) {
  p.validate();
  const double r = std::sqrt(static_cast<double>(p.n)) + std::sqrt(2.0 * log_inv_delta(p.delta));
  return {Method::thm3, p.sigma * r, std::nullopt, std::nullopt, std::nullopt};
}

BoundResult radius_hkz(const BoundParams& p) {
  p.validate();
  const double n = p.n, big_l = log_inv_delta(p.delta);
  const double r2 = n + 2.0 * std::sqrt(n * big_l) + 2.0 * big_l;
  return {Method::hkz, p.sigma * std::sqrt(r2), std::nullopt, std::nullopt, std::nullopt};
}

BoundResult radius_matrix_thm4(const BoundParams& p) {
  p.validate();
  require(p.eps.has_value(), "matrix bound requires eps");
  const double eps = *p.eps, e4 = eps * eps * eps * eps;
  const Constants c{neg_log1m_sq(eps) / e4, 2.0 / e4};
  return from_constants(Method::matrix_thm4, p, matrix_dim(p), c, p.eps);
}

double tail_delta_thm2(int n, double sigma, double eps, double r) {
  require(n >= 1, "n must be >= 1");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be finite and > 0");
  require_eps(eps);
  require(r >= 0.0, "r must be >= 0");
  const double log_delta = 0.5 * n * neg_log1m_sq(eps) - eps * eps * r * r / (2.0 * sigma * sigma);
  return log_delta >= 0.0 ? 1.0 : std::exp(log_delta);
}

double tail_delta_matrix(int m, int n, double sigma, double eps, double r) {
  require(m >= 1 && n >= 1, "m and n must be >= 1");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be finite and > 0");
  require_eps(eps);
  require(r >= 0.0, "r must be >= 0");
  const double e4 = eps * eps * eps * eps;
  const double log_delta = 0.5 * (m + n) * neg_log1m_sq(eps) - e4 * r * r / (2.0 * sigma * sigma);
  return log_delta >= 0.0 ? 1.0 : std::exp(log_delta);
}

EpsOptimum optimize_eps_thm2(int n, double sigma, double delta) {
  validate_radius_inputs(n, sigma, delta);
  const double dim = n, big_l = log_inv_delta(delta);
  const Minimum best = minimize_on_unit_interval([&](double e) { return thm2_r2(dim, big_l, e); });
  return {best.x, sigma * std::sqrt(best.value), best.unimodal};
}

EpsOptimum optimize_eps_matrix(int m, int n, double sigma, double delta) {
  validate_radius_inputs(n, sigma, delta);
  require(m >= 1, "m must be >= 1");
  const double dim = static_cast<double>(m) + n, big_l = log_inv_delta(delta);
  const Minimum best =
      minimize_on_unit_interval([&](double e) { return matrix_r2(dim, big_l, e); });
  return {best.x, sigma * std::sqrt(best.value), best.unimodal};
}

EpsOptimum optimize_eps_net(int n, double sigma, double delta) {
  validate_radius_inputs(n, sigma, delta);
  const double dim = n, big_l = log_inv_delta(delta);
  const Minimum best =
      minimize_on_unit_interval([&](double e) { return eps_net_r2(dim, big_l, e); });
  return {best.x, sigma * std::sqrt(best.value), best.unimodal};
}

BoundResult evaluate(Method method, const BoundParams& p) {
  p.validate();
  BoundParams q = p;
  if (uses_eps(method) && !q.eps) {
    switch (method) {
      case Method::eps_net: q.eps = optimize_eps_net(p.n, p.sigma, p.delta).eps; break;
      case Method::thm2: q.eps = optimize_eps_thm2(p.n, p.sigma, p.delta).eps; break;
      case Method::matrix_thm4:
        require(p.m.has_value(), "matrix bound requires m");
        q.eps = optimize_eps_matrix(*p.m, p.n, p.sigma, p.delta).eps;
        break;
      default: break;
    }
  }
  switch (method) {
    case Method::scalar: return radius_scalar(q);
    case Method::eps_net: return radius_eps_net(q);
    case Method::thm2: return radius_thm2(q);
    case Method::thm3: return radius_thm3(q);
    case Method::hkz: return radius_hkz(q);
    case Method::matrix_thm4: return radius_matrix_thm4(q);
  }
  throw std::domain_error("unknown method");
}

std::vector<BoundResult> compare_methods(const BoundParams& p) {
  p.validate();
  std::vector<BoundResult> out;
  if (p.n == 1) out.push_back(radius_scalar(p));
  out.push_back(evaluate(Method::eps_net, p));
  BoundParams auto_eps = p;
  auto_eps.eps.reset();
  out.push_back(evaluate(Method::thm2, auto_eps));
  out.push_back(radius_thm3(p));
  out.push_back(radius_hkz(p));
  return out;
}

double tuned_exponent(int n, double sigma_t, double eps) {
  require(n >= 1, "n must be >= 1");
  require(sigma_t > 0.0, "sigma * t must be > 0");
  require_eps(eps);
  const double e2 = eps * eps;
  return n * e2 / (2.0 * (1.0 - e2)) + sigma_t * sigma_t / (2.0 * e2);
}

ExponentOptimum tuned_exponent_optimum(int n, double sigma_t) {
  require(n >= 1, "n must be >= 1");
  require(sigma_t > 0.0, "sigma * t must be > 0");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double s = sigma_t;
  // (sqrt n + s)^2 / 2 - n / 2 without cancelling the n terms.
  return {std::sqrt(s / (s + root_n)), s * root_n + 0.5 * s * s};
}

} // namespace concbounds::bounds
