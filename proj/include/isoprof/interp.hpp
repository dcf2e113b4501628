#pragma once

#include <vector>

#include "isoprof/errors.hpp"

namespace isoprof {

/// Shape-preserving cubic interpolant (Fritsch-Carlson slopes): monotone data
/// produce a monotone interpolant, so tabulated profile curves stay invertible.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

}  // namespace isoprof
