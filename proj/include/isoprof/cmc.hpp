#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "isoprof/geometry.hpp"

namespace isoprof {

/// 2-torus with metric e^{2 phi}(dx^2 + dy^2).  Accepts a ConformalTorus
/// model or a 2-dimensional FlatTorus (phi identically zero).
///
/// Enclosed Riemannian areas are computed as line integrals of a vector field
/// F with div F = e^{2 phi}, assembled once from the Fourier coefficients of
/// the density on a periodic grid.
class ConformalMetric {
 public:
  explicit ConformalMetric(const ManifoldModel& model, int fourier_grid = 128);

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double min_side() const { return std::min(lx_, ly_); }
  double total_volume() const { return total_volume_; }
  const ManifoldModel& model() const { return model_; }

  double phi(const Eigen::Vector2d& p) const;
  Eigen::Vector2d grad_phi(const Eigen::Vector2d& p) const;
  Eigen::Matrix2d hessian_phi(const Eigen::Vector2d& p) const;
  double density(const Eigen::Vector2d& p) const;  // e^{2 phi}
  double scalar_curvature(const Eigen::Vector2d& p) const;

  /// Vector field with divergence e^{2 phi}; the secular part is anchored at
  /// p0 (any anchor gives the same closed line integral).
  Eigen::Vector2d area_potential(const Eigen::Vector2d& p, const Eigen::Vector2d& p0) const;

  /// Translate p into [0, lx) x [0, ly).
  Eigen::Vector2d snap_to_fundamental_domain(const Eigen::Vector2d& p) const;

 private:
  struct PotentialMode {
    double kx_freq;  // 2 pi kx / lx
    double ky_freq;  // 2 pi ky / ly
    std::complex<double> coef;  // Fourier coefficient of e^{2 phi}
    int axis;                   // 0: potential along x, 1: along y
  };

  ManifoldModel model_;
  double lx_ = 1.0, ly_ = 1.0;
  double total_volume_ = 0.0;
  double mean_density_ = 1.0;
  TrigSeries2D phi_;
  std::vector<PotentialMode> potential_modes_;
};

/// A solved constant-curvature graph over a circle of base radius r:
/// curve theta -> center + r (1 + x(theta)) (cos theta, sin theta), where the
/// trigonometric coefficients of x have mean and first harmonics exactly zero.
struct PseudoBall {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double r = 0.0;
  std::vector<double> x_cos;  // index 0..modes; [0] == 0, [1] == 0
  std::vector<double> x_sin;  // index 0..modes; [0] == 0, [1] == 0
  double h = 0.0;             // attained constant of the projected curvature equation
  double v = 0.0;             // enclosed Riemannian volume
  double w = 0.0;             // Riemannian boundary length
  double residual_norm = 0.0; // sup-norm of the projected residual
  double curvature_deviation = 0.0;  // sup |kappa_g - h|, first harmonics included
  int collocation = 0;
  int iterations = 0;

  double radial(double theta) const;                  // r (1 + x(theta))
  Eigen::Vector2d point(double theta) const;
};

struct SolveOptions {
  int modes = 64;          // highest retained trig mode of x
  int collocation = 256;   // equispaced sample count (>= 2*modes + 2)
  double tol = 1e-10;      // projected-residual sup-norm target
  int max_iterations = 50;
  double r_min_frac = 1e-4;  // reject base radii below this fraction of min side
  double r_max_frac = 0.4;   // reject base radii above this fraction of min side
  double volume_match_rel = 1e-10;  // |v - target| <= this * vol(M) in continuation
};

/// Riemannian geodesic curvature at each sample of a closed curve given at
/// equispaced parameter values; derivatives are spectral.  Positive for a
/// round disk traversed counterclockwise (outward normal convention).
std::vector<double> geodesic_curvature(const ConformalMetric& metric,
                                       const std::vector<Eigen::Vector2d>& samples);

/// Enclosed Riemannian volume and boundary length of a positively oriented
/// simple closed curve (consistent planar lift, no torus wrap).
std::pair<double, double> riemannian_measures(const ConformalMetric& metric,
                                              const std::vector<Eigen::Vector2d>& samples);

/// Newton solve of the projected constant-curvature equation for the graph
/// x and the constant h.  The unknown x is kept mean-free with first
/// harmonics pinned to zero; h absorbs the mean of the curvature.
PseudoBall solve_pseudo_ball(const ConformalMetric& metric, const Eigen::Vector2d& center,
                             double r, const SolveOptions& opts = {},
                             const PseudoBall* warm_start = nullptr);

/// (volume, boundary volume) of the pseudo-ball at (center, r).
std::pair<double, double> omega_map(const ConformalMetric& metric, const Eigen::Vector2d& center,
                                    double r, const SolveOptions& opts = {});

/// Solve for pseudo-balls attaining the given enclosed volumes (sorted
/// ascending), warm-starting along the family; secant iteration on r.
std::vector<PseudoBall> continue_in_volume(const ConformalMetric& metric,
                                           const Eigen::Vector2d& center,
                                           const std::vector<double>& target_volumes,
                                           const SolveOptions& opts = {});

/// Sample the solved curve at n equispaced parameter values.
std::vector<Eigen::Vector2d> pseudo_ball_curve(const PseudoBall& ball, int n);

}  // namespace isoprof
