#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "isoprof/cmc.hpp"
#include "isoprof/families.hpp"

namespace isoprof::oracles {

// Riemannian (area, length) of the star-shaped region around `center` with
// radial graph rho(theta).  Area by direct polar-grid quadrature (periodic
// trapezoid in theta, composite Simpson radially); length by
// Richardson-extrapolated polygon sums.  Both independent of the library's
// Green's-theorem path.
std::pair<double, double> polar_measures(const ConformalMetric& metric,
                                         const Eigen::Vector2d& center,
                                         const std::function<double(double)>& rho,
                                         int n_theta = 512, int n_rad = 200);

// Riemannian length of any closed curve by Richardson-extrapolated polygon
// sums (three-level Romberg in the segment count).
double polygonal_length(const ConformalMetric& metric,
                        const std::function<Eigen::Vector2d(double)>& point, int n = 4096);

// Literal Cartesian masked-grid area: scanline point-in-polygon over an
// N x N grid of cell midpoints, each weighted by e^{2 phi} h^2.  Boundary
// staircase limits it to coarse cross-checks.
double masked_grid_area(const ConformalMetric& metric, const std::vector<Eigen::Vector2d>& curve,
                        int grid);

// Scalar curvature by five-point finite-difference Laplacian of phi.
double fd_scalar_curvature(const ConformalMetric& metric, const Eigen::Vector2d& p, double h);

// Geodesic curvature of the circle of radius R about `center` at theta_j via
// the first variation of Riemannian length under a localized normal bump
// (von Mises profile), Romberg-extrapolated in the bump concentration.
double variational_circle_curvature(const ConformalMetric& metric, const Eigen::Vector2d& center,
                                    double R, double theta_j, double kappa_c = 100.0,
                                    double eps = 1e-5);

// Second difference of the constrained functional L - h * A along the radial
// perturbation rho_eps(theta) = base_radius(theta) + eps * bump(theta), both
// measures taken from polar_measures.  At a curve of constant Riemannian
// curvature h this equals the Jacobi quadratic form
// integral (psi'^2 - q psi^2) ds, where psi is the Riemannian normal
// component of the radial field (psi = bump * e^phi * u / sqrt(u^2 + u'^2)).
double constrained_second_variation(const ConformalMetric& metric, const Eigen::Vector2d& center,
                                    const std::function<double(double)>& base_radius,
                                    const std::function<double(double)>& bump, double h,
                                    double eps = 3e-3, int n_theta = 1024, int n_rad = 400);

// Brute-force lower contour: uniform parameter samples of every curve dropped
// into uniform v-buckets, per-bucket minimum kept.
struct BucketMin {
  double v_center = 0.0;
  double w = 0.0;
  double v_at_min = 0.0;
  bool hit = false;
};
std::vector<BucketMin> bucket_minima(const std::vector<ProfileCurve>& curves, double v_lo,
                                     double v_hi, int buckets, int samples_per_curve);

// Geodesic-cap measures on the round sphere of radius R by quadrature of the
// area integrand and a Richardson polygon length of the boundary circle
// embedded in R^3.
std::pair<double, double> sphere_cap_quadrature(double R, double t, int n = 4096);

}  // namespace isoprof::oracles
