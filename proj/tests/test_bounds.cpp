#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "concbounds/bounds.hpp"
#include "concbounds/specfun.hpp"
#include "oracles.hpp"

using namespace concbounds::bounds;

namespace {

BoundParams params(int n, double sigma, double delta, std::optional<double> eps = {},
                   std::optional<int> m = {}) {
  BoundParams p;
  p.n = n;
  p.m = m;
  p.sigma = sigma;
  p.delta = delta;
  p.eps = eps;
  return p;
}

std::vector<double> eps_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

// radius^2 as a function of eps, written out independently.
double thm2_sq(int n, double delta, double e) {
  return std::log(1 / (1 - e * e)) / (e * e) * n + 2 / (e * e) * std::log(1 / delta);
}
double matrix_sq(int dim, double delta, double e) {
  return std::log(1 / (1 - e * e)) / std::pow(e, 4) * dim + 2 / std::pow(e, 4) * std::log(1 / delta);
}

} // namespace

TEST_CASE("radius_scalar") {
  CHECK(radius_scalar(params(1, 1, 2 * std::exp(-2.0))).radius == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(radius_scalar(params(1, 1, 0.5)).radius == doctest::Approx(1.665109).epsilon(1e-6));
  CHECK(radius_scalar(params(1, 2, 0.3)).radius ==
        doctest::Approx(2 * radius_scalar(params(1, 1, 0.3)).radius).epsilon(1e-15));
  CHECK_THROWS_AS(radius_scalar(params(2, 1, 0.3)), std::domain_error);
}

TEST_CASE("eps-net constants") {
  const Constants c = eps_net_constants(0.5);
  CHECK(c.c1 == doctest::Approx(8 * std::log(5.0)).epsilon(1e-15));
  CHECK(c.c1 == doctest::Approx(12.8755).epsilon(1e-5));
  CHECK(c.c2 == 8.0);
  CHECK(eps_net_constants(0.999).c2 == doctest::Approx(2.004).epsilon(1e-3));
  CHECK_THROWS_AS(eps_net_constants(1.0), std::domain_error);
  CHECK_THROWS_AS(eps_net_constants(0.0), std::domain_error);
}

TEST_CASE("averaged-MGF constants beat the eps-net constants") {
  for (double e : eps_grid()) {
    const Constants net = eps_net_constants(e), amgf = amgf_constants(e);
    CHECK(amgf.c1 < net.c1);
    CHECK(amgf.c2 == net.c2);
    CHECK(std::log(1 - e * e) >= e * e / (e * e - 1));
  }
}

TEST_CASE("radius_eps_net") {
  CHECK(radius_eps_net(params(1, 1, std::exp(-1.0), 0.5)).radius ==
        doctest::Approx(std::sqrt(8 * std::log(5.0) + 8)).epsilon(1e-14));
  CHECK(radius_eps_net(params(6, 1, 1 - 1e-12, 0.4)).radius ==
        doctest::Approx(std::sqrt(eps_net_constants(0.4).c1 * 6)).epsilon(1e-9));
  CHECK(radius_eps_net(params(6, 3, 0.1, 0.4)).radius ==
        doctest::Approx(3 * radius_eps_net(params(6, 1, 0.1, 0.4)).radius).epsilon(1e-15));
  CHECK_THROWS_AS(radius_eps_net(params(2, 1, 0.1)), std::domain_error);
}

TEST_CASE("radius_thm2 and its tail inverse") {
  CHECK(radius_thm2(params(1, 1, std::exp(-1.0), 0.5)).radius ==
        doctest::Approx(std::sqrt(4 * std::log(4.0 / 3.0) + 8)).epsilon(1e-14));
  CHECK(radius_thm2(params(2, 1, 1 - 1e-12, 0.3)).radius ==
        doctest::Approx(std::sqrt(2 * std::log(1 / 0.91) / 0.09)).epsilon(1e-9));
  CHECK_THROWS_AS(radius_thm2(params(2, 1, 0.1)), std::domain_error);

  CHECK(tail_delta_thm2(3, 1, 0.5, 1e6) == 0.0);
  CHECK(tail_delta_thm2(3, 1, 0.5, 0.0) == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> ndist(1, 500);
  std::uniform_real_distribution<double> edist(0.01, 0.99), ldist(-12.0, -0.01), sdist(0.1, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = ndist(rng);
    const double e = edist(rng), delta = std::exp(ldist(rng)), sigma = sdist(rng);
    const double r = radius_thm2(params(n, sigma, delta, e)).radius;
    REQUIRE(oracle::rel_err(tail_delta_thm2(n, sigma, e, r), delta) < 1e-10);
  }
}

TEST_CASE("radius_thm3 and radius_hkz") {
  CHECK(radius_thm3(params(4, 1, std::exp(-2.0))).radius == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(radius_thm3(params(9, 2, 1 - 1e-15)).radius == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(radius_thm3(params(10, 1, 0.01)).radius ==
        doctest::Approx(std::sqrt(10.0) + std::sqrt(2 * std::log(100.0))).epsilon(1e-15));
  CHECK(radius_thm3(params(10, 1, 0.01)).radius == doctest::Approx(6.197).epsilon(1e-4));
  CHECK(radius_hkz(params(1, 1, std::exp(-1.0))).radius == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(radius_hkz(params(9, 2, 1 - 1e-15)).radius == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(radius_thm3(params(10, 1, 0.01)).c1 == std::nullopt);
}

TEST_CASE("radius_matrix_thm4") {
  for (double e : {0.2, 0.5, 0.8}) {
    const double mat = radius_matrix_thm4(params(1, 1, 0.05, e, 1)).radius;
    const double vec = radius_thm2(params(2, 1, 0.05, e)).radius;
    CHECK(mat * mat == doctest::Approx(vec * vec / (e * e)).epsilon(1e-14));
  }
  CHECK(radius_matrix_thm4(params(4, 1, 0.01, 0.5, 3)).radius ==
        doctest::Approx(std::sqrt(matrix_sq(7, 0.01, 0.5))).epsilon(1e-14));
  CHECK(radius_matrix_thm4(params(4, 1, 1 - 1e-12, 0.5, 3)).radius ==
        doctest::Approx(std::sqrt(7 * std::log(1 / 0.75) / 0.0625)).epsilon(1e-9));
  CHECK_THROWS_AS(radius_matrix_thm4(params(4, 1, 0.01, 0.5)), std::domain_error);
  CHECK_THROWS_AS(radius_matrix_thm4(params(4, 1, 0.01, {}, 3)), std::domain_error);

  const double r = radius_matrix_thm4(params(4, 1.5, 0.02, 0.6, 3)).radius;
  CHECK(oracle::rel_err(tail_delta_matrix(3, 4, 1.5, 0.6, r), 0.02) < 1e-10);
  CHECK(tail_delta_matrix(3, 4, 1.0, 0.6, 0.0) == 1.0);
}

TEST_CASE("every radius obeys r^2 = sigma^2 (C1 dim + C2 log(1/delta))") {
  for (double e : eps_grid()) {
    for (Method m : {Method::eps_net, Method::thm2, Method::matrix_thm4}) {
      const BoundParams p =
          params(6, 1.7, 0.03, e, m == Method::matrix_thm4 ? std::optional<int>(2) : std::nullopt);
      const BoundResult r = evaluate(m, p);
      const int dim = m == Method::matrix_thm4 ? 8 : 6;
      REQUIRE(r.c1);
      REQUIRE(r.c2);
      CHECK(r.radius * r.radius ==
            doctest::Approx(1.7 * 1.7 * (*r.c1 * dim + *r.c2 * std::log(1 / 0.03))).epsilon(1e-13));
      CHECK(r.eps_used == e);
    }
  }
}

TEST_CASE("monotone in n and delta, linear in sigma") {
  for (Method m : {Method::eps_net, Method::thm2, Method::thm3, Method::hkz, Method::matrix_thm4}) {
    const bool matrix = m == Method::matrix_thm4;
    const std::optional<double> e = uses_eps(m) ? std::optional<double>(0.5) : std::nullopt;
    const std::optional<int> rows = matrix ? std::optional<int>(3) : std::nullopt;
    double prev = 0.0;
    for (int n = 1; n <= 60; ++n) {
      const double r = evaluate(m, params(n, 1, 0.05, e, rows)).radius;
      CHECK(r >= prev);
      prev = r;
    }
    prev = INFINITY;
    for (double delta : {1e-9, 1e-5, 1e-3, 0.01, 0.1, 0.5, 0.9}) {
      const double r = evaluate(m, params(5, 1, delta, e, rows)).radius;
      CHECK(r <= prev);
      prev = r;
    }
    CHECK(evaluate(m, params(5, 4.0, 0.05, e, rows)).radius ==
          doctest::Approx(4 * evaluate(m, params(5, 1.0, 0.05, e, rows)).radius).epsilon(1e-15));
  }
  double prev = 0.0;
  for (int rows = 1; rows <= 10; ++rows) {
    const double r = radius_matrix_thm4(params(3, 1, 0.05, 0.5, rows)).radius;
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("hkz never exceeds thm3 and the gap vanishes as delta -> 1") {
  for (int n = 1; n <= 50; ++n) {
    for (double delta : {0.5, 0.1, 0.01, 0.001}) {
      CHECK(radius_hkz(params(n, 1, delta)).radius <= radius_thm3(params(n, 1, delta)).radius);
    }
    double prev_gap = INFINITY;
    for (double delta : {0.9, 0.99, 0.9999, 1 - 1e-8}) {
      const double gap = radius_thm3(params(n, 1, delta)).radius - radius_hkz(params(n, 1, delta)).radius;
      CHECK(gap >= 0.0);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
  }
}

TEST_CASE("eps optimizers") {
  const EpsOptimum best = optimize_eps_thm2(10, 1, 0.01);
  CHECK(best.unimodal);
  for (double e = 0.1; e < 0.95; e += 0.1) {
    CHECK(best.radius <= radius_thm2(params(10, 1, 0.01, e)).radius);
  }
  const auto brute = oracle::grid_min([](double e) { return std::sqrt(thm2_sq(10, 0.01, e)); }, 0.0,
                                      1.0, 1000000);
  CHECK(std::abs(best.radius - brute.value) < 1e-6);
  CHECK(best.radius <= brute.value + 1e-15);

  const double e10 = optimize_eps_thm2(10, 1, 0.01).eps;
  const double e100 = optimize_eps_thm2(100, 1, 0.01).eps;
  const double e1000 = optimize_eps_thm2(1000, 1, 0.01).eps;
  CHECK(e10 > e100);
  CHECK(e100 > e1000);

  const EpsOptimum mat = optimize_eps_matrix(3, 4, 1, 0.01);
  CHECK(mat.unimodal);
  const auto mbrute = oracle::grid_min([](double e) { return std::sqrt(matrix_sq(7, 0.01, e)); }, 0.0,
                                       1.0, 1000000);
  CHECK(std::abs(mat.radius - mbrute.value) < 1e-6);
  for (double e = 0.1; e < 0.95; e += 0.1) {
    CHECK(mat.radius <= radius_matrix_thm4(params(4, 1, 0.01, e, 3)).radius);
  }
  const EpsOptimum swapped = optimize_eps_matrix(4, 3, 1, 0.01);
  CHECK(swapped.radius == mat.radius);
  CHECK(swapped.eps == mat.eps);

  const EpsOptimum net = optimize_eps_net(10, 1, 0.01);
  for (double e = 0.1; e < 0.95; e += 0.1) {
    CHECK(net.radius <= radius_eps_net(params(10, 1, 0.01, e)).radius);
  }
}

TEST_CASE("tuned exponent minimizer") {
  for (int n : {1, 4, 30}) {
    for (double s : {0.2, 1.0, 5.0}) {
      const ExponentOptimum opt = tuned_exponent_optimum(n, s);
      CHECK(opt.eps_star == doctest::Approx(std::sqrt(s / (s + std::sqrt(n)))).epsilon(1e-15));
      CHECK(opt.minimum ==
            doctest::Approx(std::pow(std::sqrt(n) + s, 2) / 2 - n / 2.0).epsilon(1e-12));
      CHECK(tuned_exponent(n, s, opt.eps_star) == doctest::Approx(opt.minimum).epsilon(1e-12));
      CHECK(tuned_exponent(n, s, opt.eps_star * 0.99) > opt.minimum);
      CHECK(tuned_exponent(n, s, opt.eps_star * 1.01) > opt.minimum);
    }
  }
}

TEST_CASE("compare_methods") {
  const auto one = compare_methods(params(1, 1, 0.05));
  REQUIRE(one.size() == 5);
  CHECK(one[0].method == Method::scalar);
  const auto ten = compare_methods(params(10, 1, 0.01, 0.5));
  REQUIRE(ten.size() == 4);
  CHECK(ten[0].method == Method::eps_net);
  CHECK(ten[0].eps_used == 0.5);
  CHECK(ten[1].method == Method::thm2);
  CHECK(ten[1].radius == doctest::Approx(optimize_eps_thm2(10, 1, 0.01).radius).epsilon(1e-14));
  CHECK(ten[2].method == Method::thm3);
  CHECK(ten[3].method == Method::hkz);
  CHECK(ten[3].radius <= ten[2].radius);
}

TEST_CASE("every vector radius covers the Gaussian chi-square quantile") {
  for (int n = 1; n <= 50; ++n) {
    for (double delta : {0.1, 0.01, 0.001}) {
      const double exact = std::sqrt(concbounds::specfun::chi_square_quantile(n, 1 - delta));
      for (const auto& r : compare_methods(params(n, 1, delta))) CHECK(r.radius >= exact);
      CHECK(radius_eps_net(params(n, 1, delta, 0.5)).radius >= exact);
    }
  }
}

TEST_CASE("method names and parameter validation") {
  for (Method m : {Method::scalar, Method::eps_net, Method::thm2, Method::thm3, Method::hkz,
                   Method::matrix_thm4}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(parse_method("thm4") == Method::matrix_thm4);
  CHECK(parse_method("nope") == std::nullopt);
  CHECK(uses_eps(Method::thm2));
  CHECK_FALSE(uses_eps(Method::hkz));

  CHECK_THROWS_AS(params(0, 1, 0.1).validate(), std::domain_error);
  CHECK_THROWS_AS(params(2, 0, 0.1).validate(), std::domain_error);
  CHECK_THROWS_AS(params(2, 1, 0.0).validate(), std::domain_error);
  CHECK_THROWS_AS(params(2, 1, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(params(2, 1, 0.1, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(params(2, 1, 0.1, {}, 0).validate(), std::domain_error);
  CHECK_NOTHROW(params(2, 1, 0.1, 0.3, 2).validate());
}
