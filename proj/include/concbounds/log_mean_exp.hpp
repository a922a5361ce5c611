#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace concbounds {

/// Streaming estimator of log(mean(exp(x_i))) that never exponentiates
/// anything larger than 0. Tracks the running max together with the first two
/// moments of exp(x - max), which is enough for a delta-method standard error
/// of the log of the sample mean.
class LogMeanExp {
public:
  void add(double x) {
    if (x > max_) {
      const double scale = std::exp(max_ - x);
      sum_ *= scale;
      sum_sq_ *= scale * scale;
      max_ = x;
    }
    const double w = std::exp(x - max_);
    sum_ += w;
    sum_sq_ += w * w;
    ++count_;
  }

  static LogMeanExp merge(const LogMeanExp& a, const LogMeanExp& b) {
    if (a.count_ == 0) return b;
    if (b.count_ == 0) return a;
    LogMeanExp out;
    out.max_ = std::max(a.max_, b.max_);
    const double sa = std::exp(a.max_ - out.max_), sb = std::exp(b.max_ - out.max_);
    out.sum_ = a.sum_ * sa + b.sum_ * sb;
    out.sum_sq_ = a.sum_sq_ * sa * sa + b.sum_sq_ * sb * sb;
    out.count_ = a.count_ + b.count_;
    return out;
  }

  std::size_t count() const noexcept { return count_; }

  double log_mean() const {
    if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
    return max_ + std::log(sum_ / static_cast<double>(count_));
  }

  /// sd(w) / (sqrt(N) * mean(w)) with the unbiased variance; scale invariant.
  double std_error() const {
    if (count_ < 2) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(count_);
    const double mean = sum_ / n;
    const double var = std::max(0.0, (sum_sq_ - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n) / mean;
  }

private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t count_ = 0;
};

} // namespace concbounds
