#include "isoprof/fourier.hpp"

#include <cmath>

namespace isoprof {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TrigCoefficients trig_analyze(const std::vector<double>& samples, int max_mode) {
  const int K = static_cast<int>(samples.size());
  if (K < 2) throw ValidationError("trig_analyze needs at least 2 samples");
  if (max_mode < 0 || 2 * max_mode + 1 > K) {
    throw ValidationError("trig_analyze: max_mode exceeds what the sample grid resolves");
  }
  TrigCoefficients c;
  c.a.assign(max_mode + 1, 0.0);
  c.b.assign(max_mode + 1, 0.0);
  for (int j = 0; j < K; ++j) c.a[0] += samples[j];
  c.a[0] /= K;
  for (int m = 1; m <= max_mode; ++m) {
    double ca = 0.0, cb = 0.0;
    const double w = 2.0 * kPi * m / K;
    for (int j = 0; j < K; ++j) {
      ca += samples[j] * std::cos(w * j);
      cb += samples[j] * std::sin(w * j);
    }
    c.a[m] = 2.0 * ca / K;
    c.b[m] = 2.0 * cb / K;
  }
  return c;
}

double trig_eval(const TrigCoefficients& c, double theta, int derivative) {
  const int M = c.max_mode();
  const int phase = derivative % 4;
  double sum = (derivative == 0) ? c.a[0] : 0.0;
  for (int m = 1; m <= M; ++m) {
    double factor = 1.0;
    for (int i = 0; i < derivative; ++i) factor *= m;
    const double cm = std::cos(m * theta);
    const double sm = std::sin(m * theta);
    double term = 0.0;
    switch (phase) {
      case 0: term = c.a[m] * cm + c.b[m] * sm; break;
      case 1: term = -c.a[m] * sm + c.b[m] * cm; break;
      case 2: term = -c.a[m] * cm - c.b[m] * sm; break;
      case 3: term = c.a[m] * sm - c.b[m] * cm; break;
    }
    sum += factor * term;
  }
  return sum;
}

std::vector<double> trig_eval_grid(const TrigCoefficients& c, int K, int derivative) {
  std::vector<double> out(K);
  for (int j = 0; j < K; ++j) out[j] = trig_eval(c, 2.0 * kPi * j / K, derivative);
  return out;
}

std::vector<std::complex<double>> fourier_coefficients(const std::vector<double>& samples,
                                                       int max_mode) {
  const int K = static_cast<int>(samples.size());
  if (K < 2) throw ValidationError("fourier_coefficients needs at least 2 samples");
  std::vector<std::complex<double>> out(2 * max_mode + 1);
  for (int k = -max_mode; k <= max_mode; ++k) {
    std::complex<double> sum(0.0, 0.0);
    const double w = -2.0 * kPi * k / K;
    for (int j = 0; j < K; ++j) {
      sum += samples[j] * std::complex<double>(std::cos(w * j), std::sin(w * j));
    }
    out[k + max_mode] = sum / static_cast<double>(K);
  }
  return out;
}

std::vector<double> trig_resample(const std::vector<double>& samples, int new_size) {
  const int K = static_cast<int>(samples.size());
  const int max_mode = (K - 1) / 2;
  TrigCoefficients c = trig_analyze(samples, max_mode);
  return trig_eval_grid(c, new_size);
}

}  // namespace isoprof
