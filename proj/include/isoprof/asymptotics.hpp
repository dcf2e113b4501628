#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "isoprof/cmc.hpp"
#include "isoprof/geometry.hpp"

namespace isoprof {

/// Boundary volume of a Euclidean ball of volume v in R^n:
/// n omega_n^{1/n} v^{(n-1)/n}.
double euclidean_profile(int n, double v);

/// Second-order small-volume expansion of the boundary volume of a ball-like
/// region of volume rho^n around a point with scalar curvature sc:
///   c_n rho^{n-1} (1 + coefficient() rho^2), coefficient = -sc/(2n(n+2) omega_n^{2/n}).
struct ExpansionModel {
  int n = 2;
  double sc = 0.0;
  double omega_n = 0.0;
  double c_n = 0.0;

  static ExpansionModel make(int n, double sc);

  double coefficient() const;
  double operator()(double rho) const;
};

/// Expansion evaluated with sc = scalar_curvature(model, p).
double expansion_predict(const ManifoldModel& model, const Eigen::Vector2d& p, double rho);

/// Least-squares fit of (I/(c_n rho^{n-1}) - 1)/rho^2 against the basis
/// {1, rho^2}; returns the constant term (the rho^2 coefficient of the
/// expansion).  Needs >= 3 samples with distinct positive rho and I > 0.
double fit_expansion_coefficient(const std::vector<std::pair<double, double>>& rho_and_w, int n);

struct SmallProfileOptions {
  int centers_x = 16;
  int centers_y = 16;
  int refine_steps = 24;  // golden-section steps per coordinate direction
  bool refine = true;
  SolveOptions solve;
};

struct SmallProfileSample {
  double v = 0.0;
  double w = 0.0;                                   // min over centers
  Eigen::Vector2d center = Eigen::Vector2d::Zero(); // argmin
  int failed_centers = 0;
};

/// Numeric small-volume profile of a conformal torus: for each volume the
/// minimum boundary length over a center grid, with one golden-section
/// refinement pass around the grid argmin.  A center whose continuation
/// fails is skipped; a volume fails only when every center does.
std::vector<SmallProfileSample> small_volume_profile(const ConformalMetric& metric,
                                                     const std::vector<double>& volumes,
                                                     const SmallProfileOptions& opts = {});

struct CriticalPoint {
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  double sc = 0.0;
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();  // of Sc at the location
  bool nondegenerate = false;
};

struct CriticalPathPoint {
  double rho = 0.0;
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double f = 0.0;  // boundary volume of the volume rho^2 pseudo-ball at p
  bool converged = false;
};

struct CriticalPath {
  CriticalPoint seed;
  std::vector<CriticalPathPoint> points;
};

struct CriticalTrackResult {
  std::vector<CriticalPoint> maxima;      // every located maximum of Sc
  std::vector<CriticalPath> paths;        // one per nondegenerate maximum
  std::vector<double> rho;
  std::vector<double> profile_estimate;   // min over paths of f at each rho
  std::string diagnostic;                 // degeneracy reports; empty when clean
};

struct TrackOptions {
  int scan_grid = 64;        // Sc maximum scan resolution
  double gradient_step_frac = 1e-4;  // central-difference step / min side
  int max_iterations = 40;
  SolveOptions solve;

  TrackOptions() {
    solve.tol = 1e-12;
    solve.volume_match_rel = 1e-12;
  }
};

/// Track stationary points of rho -> f_rho(p) seeded at the nondegenerate
/// strict local maxima of the scalar curvature.  Degenerate maxima (singular
/// Hessian, or constant curvature) are reported in the result and not
/// tracked.
CriticalTrackResult critical_point_track(const ConformalMetric& metric,
                                         const std::vector<double>& rhos,
                                         const TrackOptions& opts = {});

}  // namespace isoprof
