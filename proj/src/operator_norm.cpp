#include "concbounds/operator_norm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "concbounds/errors.hpp"
#include "concbounds/parallel.hpp"

namespace concbounds::mc {

double operator_norm(const Eigen::MatrixXd& a, const PowerIterationOptions& options) {
  if (a.size() == 0) throw std::domain_error("operator_norm: empty matrix");
  if (!a.allFinite()) throw std::domain_error("operator_norm: non-finite entries");
  if (a.cols() == 1) return a.col(0).norm();
  if (a.rows() == 1) return a.row(0).norm();

  const Eigen::MatrixXd gram =
      a.rows() >= a.cols() ? Eigen::MatrixXd(a.transpose() * a) : Eigen::MatrixXd(a * a.transpose());

  Rng rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(gram.rows());
  for (auto& v : x) v = normal(rng);
  x.normalize();

  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd y = gram * x;
    const double theta = x.dot(y);
    if (theta <= 0.0) {
      // Only the zero matrix has a Gram matrix that annihilates a generic vector.
      if (y.norm() == 0.0) return 0.0;
    }
    residual = (y - theta * x).norm();
    if (residual <= options.tolerance * theta) return std::sqrt(theta);
    x = y / y.norm();
  }
  throw NumericalError("operator_norm: power iteration hit the iteration cap",
                       options.max_iterations, residual);
}

} // namespace concbounds::mc
