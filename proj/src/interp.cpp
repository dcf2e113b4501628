#include "isoprof/interp.hpp"

#include <algorithm>
#include <cmath>

namespace isoprof {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw ValidationError("MonotoneCubic needs >= 2 matching nodes");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw ValidationError("MonotoneCubic abscissae must be strictly increasing");
    }
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  slope_[0] = d[0];
  slope_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // Weighted harmonic mean keeps the interpolant monotone.
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // Clamp endpoint slopes (Fritsch-Carlson endpoint rule).
  for (size_t i : {size_t(0), n - 1}) {
    const double di = (i == 0) ? d[0] : d[n - 2];
    if (slope_[i] * di <= 0.0) {
      slope_[i] = 0.0;
    } else if (std::abs(slope_[i]) > 3.0 * std::abs(di)) {
      slope_[i] = 3.0 * di;
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  const size_t n = x_.size();
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
  if (i > 0) --i;
  if (i >= n - 1) i = n - 2;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

}  // namespace isoprof
