#pragma once

#include <string>
#include <vector>

#include "isoprof/cmc.hpp"
#include "isoprof/geometry.hpp"

namespace isoprof {

/// One boundary circle: circumference and the Jacobi potential
/// q(s) = |II|^2 + Ric(nu) along arclength.  Either a constant or a
/// uniform-in-arclength periodic sample array (s_j = length*j/K).
struct BoundaryComponent {
  double length = 0.0;
  bool constant_q = true;
  double q_value = 0.0;
  std::vector<double> q_samples;

  double max_abs_q() const;
};

struct BoundaryDescriptor {
  std::vector<BoundaryComponent> components;
};

enum class Stability { stable, weakly_stable, unstable };

std::string to_string(Stability s);

/// Spectrum of L v = -v'' - q v on the union of boundary circles.
struct JacobiSpectrum {
  std::vector<double> eigenvalues;        // ascending, multiplicities expanded
  int kernel_dim = 0;                     // #{|lambda| <= kernel_tol} over the union
  std::vector<int> component_kernel_dims; // same count restricted per component
  double constrained_min = 0.0;           // min Rayleigh quotient, zero mean on each component
  Stability stability = Stability::stable;
  int modes = 0;
  double kernel_tol = 0.0;
};

/// Jacobi potential of a candidate boundary at family parameter t.
/// disk r: one circle l = 2 pi r, q = 1/r^2.  Bands: two geodesic circles,
/// q = 0.  Sphere cap r: one circle l = 2 pi R sin(r/R), q = 1/(R sin(r/R))^2.
/// A trailing "~complement" is ignored: a region and its complement share the
/// boundary.
BoundaryDescriptor jacobi_potential(const ManifoldModel& model, const std::string& family_id,
                                    double t);

/// Sampled potential q = kappa_g^2 + Sc/2 along a solved pseudo-ball,
/// resampled uniformly in Riemannian arclength.
BoundaryDescriptor jacobi_potential(const ConformalMetric& metric, const PseudoBall& ball,
                                    int samples = 256);

/// modes = N: per component the basis e^{2 pi i m s / l}, |m| <= N, gives
/// 2N+1 eigenvalues (closed-form constant-q components use the exact values
/// (2 pi k/l)^2 - q at the same count).  kernel_tol <= 0 selects the default:
/// 1e-8 when every component is constant-q, else 1e-6*(max|q| + (2 pi/l)^2).
JacobiSpectrum jacobi_spectrum(const BoundaryDescriptor& descriptor, int modes = 128,
                               double kernel_tol = 0.0);

}  // namespace isoprof
