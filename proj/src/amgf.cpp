#include "concbounds/amgf.hpp"

#include <cmath>
#include <stdexcept>

#include "concbounds/log_mean_exp.hpp"
#include "concbounds/specfun.hpp"
#include "concbounds/sphere.hpp"
#include "quadrature.hpp"

namespace concbounds::amgf {

namespace {

// Substream tags, one per estimator.
constexpr std::uint64_t kPhiStream = 0x5048'4931;     // "PHI1"
constexpr std::uint64_t kMatrixStream = 0x4d41'5431;  // "MAT1"

// Below this z the two-term expansion
//   log phi_n(z) = z^2/(2n) - z^4/(4 n^2 (n+2)) + O(z^6)
// is exact to double precision relative to the value.
constexpr double kSeriesCutoff = 1e-3;
// Below this y the ratio is replaced by its leading term y/(2 nu + 2).
constexpr double kRatioLinearCutoff = 1e-8;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double log_cosh(double z) {
  return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
}

} // namespace

PhiQuery::PhiQuery(int n_, double z_) : n(n_), z(z_) {
  require(n >= 1, "PhiQuery: n must be >= 1");
  require(std::isfinite(z) && z >= 0.0, "PhiQuery: z must be finite and >= 0");
}

const char* to_string(PhiMethod method) {
  switch (method) {
    case PhiMethod::closed_form_hyperbolic: return "closed_form_hyperbolic";
    case PhiMethod::ratio_quadrature: return "ratio_quadrature";
    case PhiMethod::series: return "series";
  }
  return "unknown";
}

LogPhiResult log_phi(const PhiQuery& q) {
  if (q.z == 0.0) return {0.0, PhiMethod::series};
  if (q.n == 1) return {log_cosh(q.z), PhiMethod::closed_form_hyperbolic};

  const double n = q.n;
  if (q.z < kSeriesCutoff) {
    const double z2 = q.z * q.z;
    return {z2 / (2.0 * n) - z2 * z2 / (4.0 * n * n * (n + 2.0)), PhiMethod::series};
  }

  const specfun::BesselOrder order = specfun::BesselOrder::for_dimension(q.n);
  const double leading = 1.0 / (2.0 * order.value() + 2.0);
  auto ratio = [&](double y) {
    if (y < kRatioLinearCutoff) return y * leading;
    return specfun::bessel_ratio(order, y).value;
  };
  const double value = detail::gauss_kronrod(ratio, 0.0, q.z, 1e-300, 1e-13);
  return {std::max(0.0, value), PhiMethod::ratio_quadrature};
}

double lemma1_lower_bound(int n, double z, double eps) {
  require(n >= 1, "lemma1_lower_bound: n must be >= 1");
  require(z >= 0.0, "lemma1_lower_bound: z must be >= 0");
  require(eps > 0.0 && eps < 1.0, "lemma1_lower_bound: eps must be in (0, 1)");
  return 0.5 * n * std::log1p(-eps * eps) + eps * z;
}

double lemma4_lower_bound(int m, int n, double z, double eps) {
  require(m >= 1 && n >= 1, "lemma4_lower_bound: m and n must be >= 1");
  require(z >= 0.0, "lemma4_lower_bound: z must be >= 0");
  require(eps > 0.0 && eps < 1.0, "lemma4_lower_bound: eps must be in (0, 1)");
  return 0.5 * (m + n) * std::log1p(-eps * eps) + eps * eps * z;
}

EnergyEstimate mc_phi(int n, double z, std::size_t samples, std::uint64_t seed,
                      const ExecutionOptions& exec) {
  require(n >= 2, "mc_phi: n must be >= 2");
  require(std::isfinite(z) && z >= 0.0, "mc_phi: z must be finite and >= 0");
  require(samples >= 100, "mc_phi: need at least 100 samples");

  auto parts = detail::map_chunks<LogMeanExp>(
      samples, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng = substream(seed, {kPhiStream, static_cast<std::uint64_t>(n), chunk});
        Eigen::VectorXd l(n);
        LogMeanExp acc;
        for (std::size_t i = begin; i < end; ++i) {
          sample_unit_sphere(rng, l);
          acc.add(z * l(0));
        }
        return acc;
      });
  const LogMeanExp total = detail::tree_reduce(std::move(parts), LogMeanExp::merge);
  return {1, n, total.log_mean(), total.std_error(), samples, seed};
}

EnergyEstimate mc_matrix_energy(const Eigen::MatrixXd& a, double lambda, std::size_t samples,
                                std::uint64_t seed, const ExecutionOptions& exec) {
  require(a.rows() >= 1 && a.cols() >= 1, "mc_matrix_energy: matrix must be non-empty");
  require(a.allFinite(), "mc_matrix_energy: matrix entries must be finite");
  require(std::isfinite(lambda), "mc_matrix_energy: lambda must be finite");
  require(samples >= 100, "mc_matrix_energy: need at least 100 samples");

  // u^T A v = v^T A^T u: sample the shorter side first either way.
  const Eigen::MatrixXd b = a.rows() <= a.cols() ? a : Eigen::MatrixXd(a.transpose());
  const Eigen::MatrixXd scaled = lambda * b;
  const auto rows = b.rows(), cols = b.cols();

  auto parts = detail::map_chunks<LogMeanExp>(
      samples, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng = substream(seed, {kMatrixStream, static_cast<std::uint64_t>(rows),
                                   static_cast<std::uint64_t>(cols), chunk});
        Eigen::VectorXd u(rows), v(cols);
        LogMeanExp acc;
        for (std::size_t i = begin; i < end; ++i) {
          sample_unit_sphere(rng, u);
          sample_unit_sphere(rng, v);
          acc.add(u.dot(scaled * v));
        }
        return acc;
      });
  const LogMeanExp total = detail::tree_reduce(std::move(parts), LogMeanExp::merge);
  return {static_cast<int>(a.rows()), static_cast<int>(a.cols()), total.log_mean(),
          total.std_error(), samples, seed};
}

} // namespace concbounds::amgf
