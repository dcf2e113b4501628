#pragma once

#include <complex>
#include <vector>

#include "isoprof/errors.hpp"

namespace isoprof {

/// Real trigonometric coefficients of samples at theta_j = 2 pi j / K:
///   f(theta) ~ a[0] + sum_{m>=1} a[m] cos(m theta) + b[m] sin(m theta).
/// a has size max_mode+1, b has size max_mode+1 with b[0] = 0.
/// Requires max_mode <= (K-1)/2.
struct TrigCoefficients {
  std::vector<double> a;
  std::vector<double> b;
  int max_mode() const { return static_cast<int>(a.size()) - 1; }
};

TrigCoefficients trig_analyze(const std::vector<double>& samples, int max_mode);

/// Evaluate the series (or its derivative-th theta-derivative) at theta.
double trig_eval(const TrigCoefficients& c, double theta, int derivative = 0);

/// Evaluate at the K equispaced nodes theta_j = 2 pi j / K.
std::vector<double> trig_eval_grid(const TrigCoefficients& c, int K, int derivative = 0);

/// Complex Fourier coefficients q_hat(k) = (1/K) sum_j q_j e^{-2 pi i k j / K}
/// for k = -max_mode..max_mode, returned with index offset max_mode.
/// The sample grid must resolve the requested modes: 2*max_mode < K required
/// for an alias-free result on bandlimited input.
std::vector<std::complex<double>> fourier_coefficients(const std::vector<double>& samples,
                                                       int max_mode);

/// Resample a periodic signal to a different equispaced grid through its
/// trigonometric interpolant (exact for bandlimited input).
std::vector<double> trig_resample(const std::vector<double>& samples, int new_size);

}  // namespace isoprof
