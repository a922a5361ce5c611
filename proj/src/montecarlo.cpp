#include "concbounds/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "concbounds/amgf.hpp"
#include "concbounds/log_mean_exp.hpp"
#include "concbounds/sphere.hpp"

namespace concbounds::mc {

namespace {

constexpr std::uint64_t kBatchStream = 0x4241'5443;      // "BATC"
constexpr std::uint64_t kDirectionStream = 0x4449'5231;  // "DIR1"
constexpr std::uint64_t kMgfStream = 0x4d47'4631;        // "MGF1"
constexpr std::uint64_t kAmgfStream = 0x414d'4746;       // "AMGF"
constexpr std::uint64_t kLemma4Stream = 0x4c45'4d34;     // "LEM4"

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

void draw(const SamplerSpec& spec, Rng& rng, Eigen::MatrixXd& out) {
  switch (spec.family) {
    case Family::gaussian_vector:
    case Family::gaussian_matrix: {
      std::normal_distribution<double> normal(0.0, spec.scale);
      for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal(rng);
      break;
    }
    case Family::rademacher_vector: {
      std::bernoulli_distribution coin(0.5);
      for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = coin(rng) ? spec.scale : -spec.scale;
      break;
    }
    case Family::bounded_uniform_vector: {
      std::uniform_real_distribution<double> uniform(-spec.scale, spec.scale);
      for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = uniform(rng);
      break;
    }
  }
}

// Calls f(draw) for the draws [begin, end) of chunk `chunk` of the batch stream.
template <class F>
void for_each_batch_draw(const SamplerSpec& spec, std::uint64_t seed, std::size_t chunk,
                         std::size_t begin, std::size_t end, F&& f) {
  Rng rng = substream(seed, {kBatchStream, chunk});
  Eigen::MatrixXd x(spec.rows(), spec.cols());
  for (std::size_t i = begin; i < end; ++i) {
    draw(spec, rng, x);
    f(x);
  }
}

// A direction for <l, X>: l for vectors, the pair (u, v) for matrices.
struct Direction {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  Direction(const SamplerSpec& spec, Rng& rng) : u(spec.rows()), v(spec.cols()) {
    sample_unit_sphere(rng, u);
    if (spec.is_matrix()) {
      sample_unit_sphere(rng, v);
    } else {
      v.setOnes();
    }
  }

  double project(const Eigen::MatrixXd& x) const { return u.dot(x * v); }
};

McReport base_report(const SamplerSpec& spec, std::uint64_t seed, std::size_t samples) {
  McReport r;
  r.spec = spec;
  r.seed = seed;
  r.samples = samples;
  return r;
}

} // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::gaussian_vector: return "gaussian";
    case Family::rademacher_vector: return "rademacher";
    case Family::bounded_uniform_vector: return "uniform";
    case Family::gaussian_matrix: return "gaussian_matrix";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::gaussian_vector, Family::rademacher_vector,
                   Family::bounded_uniform_vector, Family::gaussian_matrix}) {
    if (to_string(f) == name) return f;
  }
  if (name == "gaussian_vector") return Family::gaussian_vector;
  if (name == "rademacher_vector") return Family::rademacher_vector;
  if (name == "bounded_uniform" || name == "bounded_uniform_vector") {
    return Family::bounded_uniform_vector;
  }
  return std::nullopt;
}

SamplerSpec SamplerSpec::make(Family family, int n, double scale, std::optional<int> m) {
  SamplerSpec s;
  s.family = family;
  s.n = n;
  s.m = family == Family::gaussian_matrix ? m : std::nullopt;
  s.scale = scale;
  // Gaussian: sigma is the sd. Rademacher and uniform coordinates live in
  // [-scale, scale], so Hoeffding's lemma certifies sigma = scale.
  s.sigma = scale;
  s.validate();
  return s;
}

void SamplerSpec::validate() const {
  require(n >= 1, "SamplerSpec: n must be >= 1");
  require(std::isfinite(scale) && scale > 0.0, "SamplerSpec: scale must be > 0");
  require(std::isfinite(sigma) && sigma > 0.0, "SamplerSpec: sigma must be > 0");
  if (is_matrix()) {
    require(m.has_value() && *m >= 1, "SamplerSpec: gaussian_matrix requires m >= 1");
  } else {
    require(!m.has_value(), "SamplerSpec: m is only meaningful for gaussian_matrix");
  }
}

std::vector<Eigen::MatrixXd> sample_batch(const SamplerSpec& spec, std::size_t count,
                                          std::uint64_t seed, const ExecutionOptions& exec) {
  spec.validate();
  require(count >= 1, "sample_batch: count must be >= 1");
  auto parts = detail::map_chunks<std::vector<Eigen::MatrixXd>>(
      count, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<Eigen::MatrixXd> out;
        out.reserve(end - begin);
        for_each_batch_draw(spec, seed, chunk, begin, end,
                            [&](const Eigen::MatrixXd& x) { out.push_back(x); });
        return out;
      });
  std::vector<Eigen::MatrixXd> batch;
  batch.reserve(count);
  for (auto& p : parts) {
    for (auto& x : p) batch.push_back(std::move(x));
  }
  return batch;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict check_at_most(double estimate, double std_error, double bound, double k) {
  if (estimate + k * std_error <= bound) return Verdict::pass;
  if (estimate - k * std_error > bound) return Verdict::fail;
  return Verdict::inconclusive;
}

Verdict check_at_least(double estimate, double std_error, double bound, double k) {
  return check_at_most(-estimate, std_error, -bound, k);
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

Interval clopper_pearson(std::size_t successes, std::size_t trials, double confidence) {
  require(trials >= 1 && successes <= trials, "clopper_pearson: need 0 <= k <= N, N >= 1");
  require(confidence > 0.0 && confidence < 1.0, "clopper_pearson: confidence must be in (0, 1)");
  const double k = static_cast<double>(successes), n = static_cast<double>(trials);
  const double alpha = 1.0 - confidence;
  Interval ci{0.0, 1.0};
  if (successes > 0) ci.lo = boost::math::ibeta_inv(k, n - k + 1.0, alpha);
  if (successes < trials) ci.hi = boost::math::ibeta_inv(k + 1.0, n - k, confidence);
  return ci;
}

double empirical_quantile(std::vector<double> values, double p) {
  require(!values.empty(), "empirical_quantile: no values");
  require(p > 0.0 && p <= 1.0, "empirical_quantile: p must be in (0, 1]");
  const auto size = values.size();
  auto index = static_cast<std::size_t>(std::ceil(p * static_cast<double>(size)));
  index = std::clamp<std::size_t>(index, 1, size) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index),
                   values.end());
  return values[index];
}

McReport directional_mgf_check(const SamplerSpec& spec, double lambda, std::size_t directions,
                               std::size_t samples, std::uint64_t seed,
                               const ExecutionOptions& exec) {
  spec.validate();
  require(std::isfinite(lambda), "directional_mgf_check: lambda must be finite");
  require(directions >= 1 && samples >= 1, "directional_mgf_check: counts must be >= 1");

  McReport report = base_report(spec, seed, samples);
  report.target = 0.5 * lambda * lambda * spec.sigma * spec.sigma;

  Rng direction_rng = substream(seed, {kDirectionStream});
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < directions; ++d) {
    const Direction dir(spec, direction_rng);
    auto parts = detail::map_chunks<LogMeanExp>(
        samples, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
          Rng rng = substream(seed, {kMgfStream, d, chunk});
          Eigen::MatrixXd x(spec.rows(), spec.cols());
          LogMeanExp acc;
          for (std::size_t i = begin; i < end; ++i) {
            draw(spec, rng, x);
            acc.add(lambda * dir.project(x));
          }
          return acc;
        });
    const LogMeanExp total = detail::tree_reduce(std::move(parts), LogMeanExp::merge);
    CheckRecord check{"direction_" + std::to_string(d), total.log_mean(), total.std_error(),
                      report.target, Verdict::pass};
    check.verdict = check_at_most(check.statistic, check.std_error, check.target);
    report.verdict = d == 0 ? check.verdict : combine(report.verdict, check.verdict);
    if (check.statistic - check.target > worst_excess) {
      worst_excess = check.statistic - check.target;
      report.statistic = check.statistic;
      report.std_error = check.std_error;
    }
    report.checks.push_back(std::move(check));
  }
  report.interval = {report.statistic - 3.0 * report.std_error,
                     report.statistic + 3.0 * report.std_error};
  return report;
}

McReport amgf_bound_check(const SamplerSpec& spec, double lambda, std::size_t samples,
                          std::uint64_t seed, const ExecutionOptions& exec) {
  spec.validate();
  require(std::isfinite(lambda), "amgf_bound_check: lambda must be finite");
  require(samples >= 1, "amgf_bound_check: samples must be >= 1");

  auto parts = detail::map_chunks<LogMeanExp>(
      samples, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng = substream(seed, {kAmgfStream, chunk});
        Eigen::MatrixXd x(spec.rows(), spec.cols());
        LogMeanExp acc;
        for (std::size_t i = begin; i < end; ++i) {
          draw(spec, rng, x);
          const Direction dir(spec, rng);
          acc.add(lambda * dir.project(x));
        }
        return acc;
      });
  const LogMeanExp total = detail::tree_reduce(std::move(parts), LogMeanExp::merge);

  McReport report = base_report(spec, seed, samples);
  report.statistic = total.log_mean();
  report.std_error = total.std_error();
  report.interval = {report.statistic - 3.0 * report.std_error,
                     report.statistic + 3.0 * report.std_error};
  report.target = 0.5 * lambda * lambda * spec.sigma * spec.sigma;
  report.verdict = check_at_most(report.statistic, report.std_error, report.target);
  return report;
}

McReport coverage_experiment(const SamplerSpec& spec, bounds::Method method,
                             const bounds::BoundParams& params, std::size_t samples,
                             std::uint64_t seed, const ExecutionOptions& exec) {
  spec.validate();
  params.validate();
  require(samples >= 1, "coverage_experiment: samples must be >= 1");
  const bool matrix_method = method == bounds::Method::matrix_thm4;
  require(matrix_method == spec.is_matrix(),
          "coverage_experiment: matrix method and matrix sampler must go together");
  require(params.n == spec.n, "coverage_experiment: params.n does not match the sampler");
  if (spec.is_matrix()) {
    require(params.m == spec.m, "coverage_experiment: params.m does not match the sampler");
  }
  require(params.sigma >= spec.sigma,
          "coverage_experiment: params.sigma is below the sampler's certified sigma");

  const bounds::BoundResult bound = bounds::evaluate(method, params);
  const double radius = bound.radius;

  auto parts = detail::map_chunks<std::vector<double>>(
      samples, exec, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<double> norms;
        norms.reserve(end - begin);
        for_each_batch_draw(spec, seed, chunk, begin, end, [&](const Eigen::MatrixXd& x) {
          norms.push_back(spec.is_matrix() ? operator_norm(x) : x.norm());
        });
        return norms;
      });
  std::vector<double> norms;
  norms.reserve(samples);
  for (const auto& p : parts) norms.insert(norms.end(), p.begin(), p.end());

  const auto covered = static_cast<std::size_t>(
      std::count_if(norms.begin(), norms.end(), [radius](double v) { return v <= radius; }));
  const double coverage = static_cast<double>(covered) / static_cast<double>(samples);
  const double target = 1.0 - params.delta;

  McReport report = base_report(spec, seed, samples);
  report.statistic = coverage;
  report.std_error = std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(samples));
  report.interval = clopper_pearson(covered, samples, kCoverageConfidence);
  report.target = target;
  if (report.interval.lo >= target) {
    report.verdict = Verdict::pass;
  } else if (report.interval.hi < target) {
    report.verdict = Verdict::fail;
  } else {
    report.verdict = Verdict::inconclusive;
  }
  report.extras.emplace_back("radius", radius);
  if (bound.eps_used) report.extras.emplace_back("eps", *bound.eps_used);
  report.extras.emplace_back("norm_quantile", empirical_quantile(std::move(norms), target));
  return report;
}

McReport lemma4_certification(int m, int n, double lambda, std::size_t matrices,
                              std::size_t samples, std::uint64_t seed,
                              const ExecutionOptions& exec) {
  require(m >= 1 && n >= 1, "lemma4_certification: m and n must be >= 1");
  require(std::isfinite(lambda), "lemma4_certification: lambda must be finite");
  require(matrices >= 1, "lemma4_certification: matrices must be >= 1");

  const SamplerSpec spec = SamplerSpec::make(Family::gaussian_matrix, n, 1.0, m);
  McReport report = base_report(spec, seed, samples);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < matrices; ++k) {
    Rng rng = substream(seed, {kLemma4Stream, k});
    Eigen::MatrixXd a(m, n);
    draw(spec, rng, a);
    const double z = std::abs(lambda) * operator_norm(a);
    double bound = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 19; ++i) {
      bound = std::max(bound, amgf::lemma4_lower_bound(m, n, z, 0.05 * i));
    }
    const amgf::EnergyEstimate est = amgf::mc_matrix_energy(
        a, lambda, samples, derive_seed(seed, {kLemma4Stream, k}), exec);
    CheckRecord check{"matrix_" + std::to_string(k), est.log_estimate, est.std_error, bound,
                      Verdict::pass};
    check.verdict = check_at_least(check.statistic, check.std_error, check.target);
    report.verdict = k == 0 ? check.verdict : combine(report.verdict, check.verdict);
    if (check.statistic - check.target < worst_margin) {
      worst_margin = check.statistic - check.target;
      report.statistic = check.statistic;
      report.std_error = check.std_error;
      report.target = check.target;
    }
    report.checks.push_back(std::move(check));
  }
  report.interval = {report.statistic - 3.0 * report.std_error,
                     report.statistic + 3.0 * report.std_error};
  return report;
}

} // namespace concbounds::mc
