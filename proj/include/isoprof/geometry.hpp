#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "isoprof/errors.hpp"

namespace isoprof {

enum class ModelKind { FlatTorus, RoundSphere, ConformalTorus };

/// One term of the conformal exponent on a torus with sides (L1, L2):
///   cos_coef * cos(2pi(kx x/L1 + ky y/L2)) + sin_coef * sin(2pi(kx x/L1 + ky y/L2)).
struct PhiMode {
  int kx = 0;
  int ky = 0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Finite trigonometric series on a rectangle with given periods.
/// All partial derivatives are exact (term-by-term phase shifts).
class TrigSeries2D {
 public:
  TrigSeries2D() = default;
  TrigSeries2D(double period_x, double period_y, std::vector<PhiMode> modes);

  double value(const Eigen::Vector2d& p) const;
  /// d^(ox+oy) f / dx^ox dy^oy at p.
  double partial(int ox, int oy, const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p) const;
  double laplacian(const Eigen::Vector2d& p) const;

  const std::vector<PhiMode>& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }
  double period_x() const { return period_x_; }
  double period_y() const { return period_y_; }

 private:
  double period_x_ = 1.0;
  double period_y_ = 1.0;
  std::vector<PhiMode> modes_;
};

/// Conformal factor and its first two derivatives at a point.
struct ConformalData {
  double phi = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  double laplacian = 0.0;
};

/// A model surface/manifold: a rectangular flat torus (any dimension >= 2),
/// a round 2-sphere, or a 2-torus with metric e^{2 phi}(dx^2 + dy^2) where
/// phi is a finite trigonometric series.
///
/// Torus sides are stored sorted ascending; a conformal torus is canonicalised
/// by swapping coordinates (and transposing mode indices) when needed, which
/// is an isometry.
class ManifoldModel {
 public:
  static ManifoldModel flat_torus(std::vector<double> sides);
  static ManifoldModel sphere(double radius);
  static ManifoldModel conformal_torus(double lx, double ly, std::vector<PhiMode> modes,
                                       int quadrature_grid = 256);

  ModelKind kind() const { return kind_; }
  int dimension() const { return dimension_; }

  /// Torus kinds only.
  const std::vector<double>& sides() const;
  double min_side() const;

  /// RoundSphere only.
  double radius() const;

  /// ConformalTorus only.
  const TrigSeries2D& phi() const;

  /// Riemannian volume of the whole manifold.  Product of sides, 4 pi R^2,
  /// or the quadrature value of integral e^{2 phi} dx dy.
  double total_volume() const { return total_volume_; }

  std::string describe() const;

 private:
  ManifoldModel() = default;

  ModelKind kind_ = ModelKind::FlatTorus;
  int dimension_ = 2;
  std::vector<double> sides_;
  double radius_ = 0.0;
  TrigSeries2D phi_;
  double total_volume_ = 0.0;
};

/// Conformal factor data at p; requires a ConformalTorus model.
ConformalData conformal_data(const ManifoldModel& model, const Eigen::Vector2d& p);

/// Scalar curvature at p: 0 (flat torus), 2/R^2 (sphere),
/// -2 e^{-2 phi} Laplacian(phi) (conformal torus).
double scalar_curvature(const ManifoldModel& model, const Eigen::Vector2d& p);

/// Exact first/second derivatives of the scalar curvature (ConformalTorus only).
Eigen::Vector2d scalar_curvature_gradient(const ManifoldModel& model, const Eigen::Vector2d& p);
Eigen::Matrix2d scalar_curvature_hessian(const ManifoldModel& model, const Eigen::Vector2d& p);

/// Volume omega_n of the unit ball in R^n, via omega_n = omega_{n-2} 2 pi / n
/// with omega_1 = 2, omega_2 = pi.
double unit_ball_volume(int n);

/// Leading small-volume profile coefficient c_n = n omega_n^{1/n}:
/// a Euclidean ball of volume rho^n has boundary volume c_n rho^{n-1}.
double profile_leading_coefficient(int n);

}  // namespace isoprof
