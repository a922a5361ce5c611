#pragma once

// Seeded sub-Gaussian samplers and the Monte Carlo experiments that certify
// the directional MGF condition, the AMGF bound and the coverage of every
// radius calculator in `bounds`.
//
// Every experiment is bit-reproducible in (spec, seed, samples) regardless of
// ExecutionOptions::workers: draws come from per-chunk substreams and partial
// results are combined with a fixed pairwise tree.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "concbounds/bounds.hpp"
#include "concbounds/operator_norm.hpp"
#include "concbounds/parallel.hpp"

namespace concbounds::mc {

enum class Family { gaussian_vector, rademacher_vector, bounded_uniform_vector, gaussian_matrix };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

struct SamplerSpec {
  Family family = Family::gaussian_vector;
  int n = 1;
  std::optional<int> m;  // rows, gaussian_matrix only
  double scale = 1.0;    // Gaussian sd, Rademacher magnitude, or uniform half-width
  double sigma = 1.0;    // certified sub-Gaussian parameter; variance proxy is sigma^2

  /// Builds a spec with its certified sigma: the Gaussian sd, or by Hoeffding's
  /// lemma the half-width of the coordinate range for bounded families.
  static SamplerSpec make(Family family, int n, double scale, std::optional<int> m = {});

  bool is_matrix() const noexcept { return family == Family::gaussian_matrix; }
  int rows() const noexcept { return is_matrix() ? *m : n; }
  int cols() const noexcept { return is_matrix() ? n : 1; }

  void validate() const;
};

/// `count` draws; vector families produce n x 1 columns, gaussian_matrix
/// produces m x n matrices.
std::vector<Eigen::MatrixXd> sample_batch(const SamplerSpec& spec, std::size_t count,
                                          std::uint64_t seed, const ExecutionOptions& exec = {});

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict verdict);

/// Three-way comparison of an MC estimate against a claimed upper bound with a
/// margin of `k` standard errors: pass if estimate + k se <= bound, fail if
/// estimate - k se > bound, inconclusive otherwise.
Verdict check_at_most(double estimate, double std_error, double bound, double k = 3.0);

/// Mirror image of check_at_most for a claimed lower bound.
Verdict check_at_least(double estimate, double std_error, double bound, double k = 3.0);

/// fail dominates inconclusive dominates pass.
Verdict combine(Verdict a, Verdict b);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// One-sided Clopper-Pearson bounds: `lo` is the lower bound at the given
/// confidence and `hi` the upper bound at the same confidence.
Interval clopper_pearson(std::size_t successes, std::size_t trials, double confidence);

/// Order statistic at 1-based index ceil(p * size) of the sorted values.
double empirical_quantile(std::vector<double> values, double p);

struct CheckRecord {
  std::string name;
  double statistic = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  Verdict verdict = Verdict::pass;
};

struct McReport {
  SamplerSpec spec;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double statistic = 0.0;
  double std_error = 0.0;
  Interval interval;  // estimate +/- 3 se, or Clopper-Pearson bounds for coverage
  double target = 0.0;
  Verdict verdict = Verdict::pass;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, double>> extras;
};

/// For `directions` random unit directions (pairs (u, v) for matrices),
/// estimates log E exp(lambda <l, X>) from `samples` draws and checks it
/// against lambda^2 sigma^2 / 2. The report statistic is the direction with
/// the largest estimate - target.
McReport directional_mgf_check(const SamplerSpec& spec, double lambda, std::size_t directions,
                               std::size_t samples, std::uint64_t seed,
                               const ExecutionOptions& exec = {});

/// Joint (X, l) sampling estimate of log Phi_X(lambda), checked against
/// lambda^2 sigma^2 / 2.
McReport amgf_bound_check(const SamplerSpec& spec, double lambda, std::size_t samples,
                          std::uint64_t seed, const ExecutionOptions& exec = {});

/// Empirical P(|X| <= r) for the radius `method` gives at `params` (Euclidean
/// norm for vectors, operator norm for matrices). Pass iff the 99.9%
/// Clopper-Pearson lower bound is >= 1 - delta; fail iff the upper bound is
/// below it. The draws are exactly sample_batch(spec, samples, seed).
McReport coverage_experiment(const SamplerSpec& spec, bounds::Method method,
                             const bounds::BoundParams& params, std::size_t samples,
                             std::uint64_t seed, const ExecutionOptions& exec = {});

/// For `matrices` random m x n Gaussian matrices, checks the MC log matrix
/// energy at lambda against the best lower bound over eps in {0.05, ..., 0.95}.
McReport lemma4_certification(int m, int n, double lambda, std::size_t matrices,
                              std::size_t samples, std::uint64_t seed,
                              const ExecutionOptions& exec = {});

inline constexpr double kCoverageConfidence = 0.999;

} // namespace concbounds::mc
