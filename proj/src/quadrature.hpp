#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "concbounds/errors.hpp"

namespace concbounds::detail {

/// Adaptive Simpson with Richardson correction. Throws NumericalError when the
/// recursion depth is exhausted before the local tolerance is met.
template <class F>
class AdaptiveSimpson {
public:
  AdaptiveSimpson(F f, double abs_tol, int max_depth = 60)
      : f_(std::move(f)), abs_tol_(abs_tol), max_depth_(max_depth) {}

  double integrate(double a, double b) {
    if (a == b) return 0.0;
    const double fa = f_(a), fb = f_(b), m = 0.5 * (a + b), fm = f_(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, abs_tol_, 0);
  }

  long evaluations() const noexcept { return evaluations_; }

private:
  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f_(lm), frm = f_(rm);
    evaluations_ += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    if (depth >= max_depth_) {
      throw NumericalError("adaptive Simpson: depth limit reached", depth, std::abs(diff));
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  F f_;
  double abs_tol_;
  int max_depth_;
  long evaluations_ = 3;
};

struct KronrodSegment {
  double a, b, value, error;
  bool operator<(const KronrodSegment& o) const { return error < o.error; }
};

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
KronrodSegment kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const double sum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

/// Globally adaptive Gauss-Kronrod (7/15): bisect the segment with the largest
/// error estimate until the summed estimate meets max(abs_tol, rel_tol*|I|).
template <class F>
double gauss_kronrod(F f, double a, double b, double abs_tol, double rel_tol,
                     int max_segments = 4000) {
  if (a == b) return 0.0;
  std::priority_queue<KronrodSegment> heap;
  const KronrodSegment first = kronrod15(f, a, b);
  double total = first.value, error = first.error;
  heap.push(first);
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_segments) {
      throw NumericalError("Gauss-Kronrod: segment limit reached",
                           static_cast<long>(heap.size()), error);
    }
    const KronrodSegment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const KronrodSegment left = kronrod15(f, worst.a, mid);
    const KronrodSegment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the segments to shed the drift of the running updates.
  double sum = 0.0;
  std::vector<KronrodSegment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(),
            [](const KronrodSegment& l, const KronrodSegment& r) { return l.a < r.a; });
  for (const auto& p : parts) sum += p.value;
  return sum;
}

} // namespace concbounds::detail
