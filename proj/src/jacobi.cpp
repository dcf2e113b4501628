#include "isoprof/jacobi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "isoprof/families.hpp"
#include "isoprof/fourier.hpp"

namespace isoprof {

namespace {

constexpr double kPi = std::numbers::pi;

// Build one boundary component from equispaced-in-theta samples of the
// parameter speed ds/dtheta and of the potential: total length from the
// speed mean, then q resampled uniformly in arclength (the speed series
// antiderivative is inverted by safeguarded Newton).
BoundaryComponent resample_uniform_arclength(const std::vector<double>& speed,
                                             const std::vector<double>& q_theta) {
  const int K = static_cast<int>(speed.size());
  const int max_mode = (K - 1) / 2;
  const TrigCoefficients sigma = trig_analyze(speed, max_mode);
  const TrigCoefficients q_series = trig_analyze(q_theta, max_mode);
  const double length = 2.0 * kPi * sigma.a[0];

  const auto arclength = [&](double theta) {
    double s = sigma.a[0] * theta;
    for (int m = 1; m <= sigma.max_mode(); ++m) {
      s += (sigma.a[m] * std::sin(m * theta) - sigma.b[m] * (std::cos(m * theta) - 1.0)) / m;
    }
    return s;
  };

  BoundaryComponent comp;
  comp.length = length;
  comp.constant_q = false;
  comp.q_samples.resize(K);
  for (int i = 0; i < K; ++i) {
    const double target = length * i / K;
    double lo = 0.0, hi = 2.0 * kPi;
    double theta = target / sigma.a[0];
    for (int it = 0; it < 60; ++it) {
      const double f = arclength(theta) - target;
      if (f > 0.0) {
        hi = theta;
      } else {
        lo = theta;
      }
      if (std::abs(f) < 1e-14 * length) break;
      double next = theta - f / trig_eval(sigma, theta);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      theta = next;
    }
    comp.q_samples[i] = trig_eval(q_series, theta);
  }

  // Collapse numerically constant potentials to the closed-form path.
  double q_lo = comp.q_samples[0], q_hi = comp.q_samples[0];
  for (double q : comp.q_samples) {
    q_lo = std::min(q_lo, q);
    q_hi = std::max(q_hi, q);
  }
  if (q_hi - q_lo <= 1e-12 * std::max(1.0, std::max(std::abs(q_lo), std::abs(q_hi)))) {
    comp.constant_q = true;
    comp.q_value = 0.5 * (q_lo + q_hi);
    comp.q_samples.clear();
  }
  return comp;
}

}  // namespace

double BoundaryComponent::max_abs_q() const {
  if (constant_q) return std::abs(q_value);
  double m = 0.0;
  for (double q : q_samples) m = std::max(m, std::abs(q));
  return m;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::weakly_stable: return "weakly_stable";
    case Stability::unstable: return "unstable";
  }
  return "unstable";
}

BoundaryDescriptor jacobi_potential(const ManifoldModel& model, const std::string& family_id,
                                    double t) {
  std::string id = family_id;
  const std::string suffix = "~complement";  // complement shares the boundary
  if (id.size() > suffix.size() && id.compare(id.size() - suffix.size(), suffix.size(), suffix) == 0) {
    id.erase(id.size() - suffix.size());
  }

  BoundaryDescriptor d;
  switch (model.kind()) {
    case ModelKind::FlatTorus: {
      if (model.dimension() != 2) {
        throw ValidationError("stability analysis covers curve boundaries only (dimension 2)");
      }
      const double l1 = model.sides()[0];
      const double l2 = model.sides()[1];
      if (id == "disk") {
        if (!(t > 0.0) || t > 0.5 * l1) {
          throw ValidationError("disk radius outside (0, min_side/2]");
        }
        d.components.push_back({2.0 * kPi * t, true, 1.0 / (t * t), {}});
        return d;
      }
      if (id == "band-x" || id == "band-y") {
        const double along = (id == "band-x") ? l1 : l2;
        const double across = (id == "band-x") ? l2 : l1;
        if (t < 0.0 || t > across) throw ValidationError("band width outside [0, side]");
        d.components.push_back({along, true, 0.0, {}});
        d.components.push_back({along, true, 0.0, {}});
        return d;
      }
      break;
    }
    case ModelKind::RoundSphere: {
      if (id == "cap") {
        const double R = model.radius();
        if (!(t > 0.0) || !(t < kPi * R)) {
          throw ValidationError("cap radius outside (0, pi R)");
        }
        const double s = R * std::sin(t / R);
        d.components.push_back({2.0 * kPi * s, true, 1.0 / (s * s), {}});
        return d;
      }
      break;
    }
    case ModelKind::ConformalTorus: {
      if (id == "band-x" || id == "band-y") {
        // Bands exist only where the factor is transversally flat; their
        // boundary lines are then geodesics (kappa = 0), but q = Sc/2 still
        // varies along them and the length is the weighted integral of e^phi.
        const int axis = (id == "band-x") ? 0 : 1;
        if (!conformal_band_exists(model, axis)) {
          throw ValidationError("band family requires a transversally flat conformal factor: " +
                                family_id);
        }
        const double across = model.sides()[axis == 0 ? 1 : 0];
        if (t < 0.0 || t > across) throw ValidationError("band width outside [0, side]");
        const ConformalMetric metric(model);
        const double along = model.sides()[axis];
        const int K = 256;
        std::vector<double> speed(K), q_theta(K);
        for (int j = 0; j < K; ++j) {
          const double coord = along * j / K;
          const Eigen::Vector2d p =
              (axis == 0) ? Eigen::Vector2d(coord, 0.0) : Eigen::Vector2d(0.0, coord);
          speed[j] = std::exp(metric.phi(p)) * (along / (2.0 * kPi));
          q_theta[j] = 0.5 * metric.scalar_curvature(p);
        }
        BoundaryComponent comp = resample_uniform_arclength(speed, q_theta);
        d.components.push_back(comp);
        d.components.push_back(std::move(comp));
        return d;
      }
      const std::string prefix = "pseudo-ball@";
      if (id.compare(0, prefix.size(), prefix) == 0) {
        double cx = 0.0, cy = 0.0;
        if (std::sscanf(id.c_str() + prefix.size(), "%lf,%lf", &cx, &cy) != 2) {
          throw ValidationError("malformed pseudo-ball family id: " + family_id);
        }
        const ConformalMetric metric(model);
        const PseudoBall ball = solve_pseudo_ball(metric, {cx, cy}, t);
        return jacobi_potential(metric, ball);
      }
      break;
    }
  }
  throw ValidationError("unknown family for this model: " + family_id);
}

BoundaryDescriptor jacobi_potential(const ConformalMetric& metric, const PseudoBall& ball,
                                    int samples) {
  if (ball.r <= 0.0) throw ValidationError("pseudo-ball has no radius");
  const int K = std::max(samples, 64);

  std::vector<Eigen::Vector2d> pts(K);
  std::vector<double> speed(K), q_theta(K);
  TrigCoefficients cx{ball.x_cos, ball.x_sin};
  for (int j = 0; j < K; ++j) {
    const double theta = 2.0 * kPi * j / K;
    pts[j] = ball.point(theta);
    const double u = ball.r * (1.0 + trig_eval(cx, theta));
    const double du = ball.r * trig_eval(cx, theta, 1);
    speed[j] = std::exp(metric.phi(pts[j])) * std::hypot(u, du);
  }
  const std::vector<double> kappa = geodesic_curvature(metric, pts);
  for (int j = 0; j < K; ++j) {
    q_theta[j] = kappa[j] * kappa[j] + 0.5 * metric.scalar_curvature(pts[j]);
  }

  BoundaryDescriptor d;
  d.components.push_back(resample_uniform_arclength(speed, q_theta));
  return d;
}

namespace {

struct ComponentSpectrum {
  std::vector<double> eigenvalues;
  double constrained_min = 0.0;
};

ComponentSpectrum constant_spectrum(const BoundaryComponent& c, int N) {
  ComponentSpectrum out;
  const double base = 2.0 * kPi / c.length;
  out.eigenvalues.push_back(-c.q_value);
  for (int k = 1; k <= N; ++k) {
    const double lam = base * base * k * k - c.q_value;
    out.eigenvalues.push_back(lam);
    out.eigenvalues.push_back(lam);
  }
  out.constrained_min = base * base - c.q_value;
  return out;
}

ComponentSpectrum sampled_spectrum(const BoundaryComponent& c, int N) {
  // Galerkin matrix in the basis e^{2 pi i m s / l}, |m| <= N:
  //   A(m, n) = (2 pi m / l)^2 delta_mn - q_hat(m - n), Hermitian for real q.
  std::vector<double> q = c.q_samples;
  const int needed = 4 * N + 2;  // alias-free lags up to 2N
  if (static_cast<int>(q.size()) < needed) q = trig_resample(q, needed);
  const std::vector<std::complex<double>> qh = fourier_coefficients(q, 2 * N);

  const int dim = 2 * N + 1;
  const double base = 2.0 * kPi / c.length;
  Eigen::MatrixXcd A(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const int m = i - N;
    for (int j = 0; j < dim; ++j) {
      const int n = j - N;
      std::complex<double> v = -qh[(m - n) + 2 * N];
      if (i == j) v += base * base * m * m;
      A(i, j) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  ComponentSpectrum out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);

  // Zero mean on the component = zero coefficient of m = 0; the constrained
  // minimum is the smallest eigenvalue of the principal submatrix without it.
  Eigen::MatrixXcd B(dim - 1, dim - 1);
  for (int i = 0, bi = 0; i < dim; ++i) {
    if (i == N) continue;
    for (int j = 0, bj = 0; j < dim; ++j) {
      if (j == N) continue;
      B(bi, bj) = A(i, j);
      ++bj;
    }
    ++bi;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esc(B, Eigen::EigenvaluesOnly);
  out.constrained_min = esc.eigenvalues()(0);
  return out;
}

}  // namespace

JacobiSpectrum jacobi_spectrum(const BoundaryDescriptor& descriptor, int modes,
                               double kernel_tol) {
  if (modes < 8) throw ValidationError("jacobi_spectrum needs at least 8 modes");
  if (descriptor.components.empty()) throw ValidationError("boundary has no components");
  for (const BoundaryComponent& c : descriptor.components) {
    if (!(c.length > 0.0)) throw ValidationError("boundary component with nonpositive length");
    if (!c.constant_q && c.q_samples.size() < 8) {
      throw ValidationError("sampled potential needs at least 8 samples");
    }
  }

  if (kernel_tol <= 0.0) {
    bool all_constant = true;
    double scale = 0.0;
    for (const BoundaryComponent& c : descriptor.components) {
      all_constant = all_constant && c.constant_q;
      const double base = 2.0 * kPi / c.length;
      scale = std::max(scale, c.max_abs_q() + base * base);
    }
    kernel_tol = all_constant ? 1e-8 : 1e-6 * scale;
  }

  JacobiSpectrum spec;
  spec.modes = modes;
  spec.kernel_tol = kernel_tol;
  spec.constrained_min = std::numeric_limits<double>::infinity();
  for (const BoundaryComponent& c : descriptor.components) {
    const ComponentSpectrum cs =
        c.constant_q ? constant_spectrum(c, modes) : sampled_spectrum(c, modes);
    int kdim = 0;
    for (double lam : cs.eigenvalues) {
      if (std::abs(lam) <= kernel_tol) ++kdim;
    }
    spec.component_kernel_dims.push_back(kdim);
    spec.kernel_dim += kdim;
    spec.constrained_min = std::min(spec.constrained_min, cs.constrained_min);
    spec.eigenvalues.insert(spec.eigenvalues.end(), cs.eigenvalues.begin(), cs.eigenvalues.end());
  }
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());

  if (spec.constrained_min > kernel_tol) {
    spec.stability = Stability::stable;
  } else if (spec.constrained_min >= -kernel_tol) {
    spec.stability = Stability::weakly_stable;
  } else {
    spec.stability = Stability::unstable;
  }
  return spec;
}

}  // namespace isoprof
