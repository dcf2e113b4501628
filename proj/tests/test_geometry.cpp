#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "isoprof/cmc.hpp"
#include "isoprof/geometry.hpp"
#include "oracles.hpp"

using namespace isoprof;

namespace {

constexpr double kPi = 3.14159265358979323846;

ManifoldModel cos_x_torus() {
  return ManifoldModel::conformal_torus(2 * kPi, 2 * kPi, {{1, 0, 0.1, 0.0}});
}

ManifoldModel wavy_torus() {
  // Two incommensurate-looking modes, no symmetry axis.
  return ManifoldModel::conformal_torus(2 * kPi, 2 * kPi,
                                        {{1, 0, 0.07, 0.02}, {1, 2, -0.03, 0.04}});
}

}  // namespace

TEST_CASE("unit ball volumes follow the two-step recursion and closed forms") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(5) == doctest::Approx(8.0 * kPi * kPi / 15.0).epsilon(1e-15));
  // Gamma-function closed form as an independent check for larger n.
  for (int n = 1; n <= 12; ++n) {
    const double gamma_form = std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    CHECK(unit_ball_volume(n) == doctest::Approx(gamma_form).epsilon(1e-13));
  }
  CHECK_THROWS_AS(unit_ball_volume(0), ValidationError);
  CHECK_THROWS_AS(unit_ball_volume(-3), ValidationError);
}

TEST_CASE("leading profile coefficient reproduces circle and sphere constants") {
  // n = 2: a disk of area rho^2 has perimeter 2 sqrt(pi) rho.
  CHECK(profile_leading_coefficient(2) == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-15));
  // n = 3: ball of volume rho^3 has area 3 omega_3^{1/3} rho^2 = (36 pi)^{1/3} rho^2.
  CHECK(profile_leading_coefficient(3) ==
        doctest::Approx(std::cbrt(36.0 * kPi)).epsilon(1e-14));
  // Consistency: c_n = n omega_n^{1/n}.
  for (int n = 2; n <= 8; ++n) {
    CHECK(profile_leading_coefficient(n) ==
          doctest::Approx(n * std::pow(unit_ball_volume(n), 1.0 / n)).epsilon(1e-14));
  }
}

TEST_CASE("flat torus model validation and canonical side order") {
  auto m = ManifoldModel::flat_torus({3.0, 1.0, 2.0});
  REQUIRE(m.dimension() == 3);
  CHECK(m.sides() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(m.min_side() == 1.0);
  CHECK(m.total_volume() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(scalar_curvature(m, Eigen::Vector2d(0.3, 0.4)) == 0.0);

  CHECK_THROWS_AS(ManifoldModel::flat_torus({}), ValidationError);
  CHECK_THROWS_AS(ManifoldModel::flat_torus({2.0}), ValidationError);
  CHECK_THROWS_AS(ManifoldModel::flat_torus({1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(ManifoldModel::flat_torus({1.0, 0.0}), ValidationError);
}

TEST_CASE("sphere model stores radius, volume, and curvature") {
  auto s = ManifoldModel::sphere(1.3);
  CHECK(s.dimension() == 2);
  CHECK(s.radius() == 1.3);
  CHECK(s.total_volume() == doctest::Approx(4.0 * kPi * 1.3 * 1.3).epsilon(1e-15));
  CHECK(scalar_curvature(s, Eigen::Vector2d::Zero()) ==
        doctest::Approx(2.0 / (1.3 * 1.3)).epsilon(1e-15));
  CHECK_THROWS_AS(ManifoldModel::sphere(0.0), ValidationError);
  CHECK_THROWS_AS(ManifoldModel::sphere(-1.0), ValidationError);
  CHECK_THROWS_AS(s.sides(), ValidationError);
}

TEST_CASE("conformal torus volume matches the Bessel closed form") {
  // integral over the cell of e^{0.2 cos x} dx dy = (2 pi)^2 I_0(0.2).
  auto m = cos_x_torus();
  const double expect = 4.0 * kPi * kPi * std::cyl_bessel_i(0.0, 0.2);
  CHECK(m.total_volume() == doctest::Approx(expect).epsilon(1e-12));

  // Constant phi = c: volume e^{2c} lx ly.
  auto c = ManifoldModel::conformal_torus(2.0, 3.0, {{0, 0, 0.25, 0.0}});
  CHECK(c.total_volume() == doctest::Approx(std::exp(0.5) * 6.0).epsilon(1e-12));
}

TEST_CASE("conformal torus rejects duplicate frequency pairs after sign normalization") {
  CHECK_THROWS_AS(ManifoldModel::conformal_torus(
                      2 * kPi, 2 * kPi, {{1, 2, 0.1, 0.0}, {-1, -2, 0.0, 0.1}}),
                  ValidationError);
  CHECK_THROWS_AS(ManifoldModel::conformal_torus(2 * kPi, 2 * kPi,
                                                 {{0, 1, 0.1, 0.0}, {0, -1, 0.05, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(ManifoldModel::conformal_torus(-1.0, 2.0, {}), ValidationError);
}

TEST_CASE("conformal canonicalization swaps coordinates isometrically") {
  // lx > ly forces the swap; the swapped model must agree with the manually
  // transposed one at transposed points.
  auto swapped = ManifoldModel::conformal_torus(4.0, 3.0, {{1, 2, 0.1, 0.05}});
  auto manual = ManifoldModel::conformal_torus(3.0, 4.0, {{2, 1, 0.1, 0.05}});
  REQUIRE(swapped.sides() == std::vector<double>{3.0, 4.0});
  for (double a : {0.0, 0.7, 1.9, 2.5}) {
    for (double b : {0.0, 1.1, 3.3}) {
      const Eigen::Vector2d p(a, b);
      CHECK(swapped.phi().value(p) == doctest::Approx(manual.phi().value(p)).epsilon(1e-15));
    }
  }
  CHECK(swapped.total_volume() == doctest::Approx(manual.total_volume()).epsilon(1e-14));
}

TEST_CASE("trig series partial derivatives agree with finite differences") {
  auto m = wavy_torus();
  const TrigSeries2D& phi = m.phi();
  const Eigen::Vector2d p(1.234, 2.345);
  const double h = 1e-5;

  auto fd_x = [&](auto f) {
    return (f(Eigen::Vector2d(p.x() + h, p.y())) - f(Eigen::Vector2d(p.x() - h, p.y()))) /
           (2 * h);
  };
  auto fd_y = [&](auto f) {
    return (f(Eigen::Vector2d(p.x(), p.y() + h)) - f(Eigen::Vector2d(p.x(), p.y() - h))) /
           (2 * h);
  };

  auto val = [&](const Eigen::Vector2d& q) { return phi.value(q); };
  CHECK(phi.partial(1, 0, p) == doctest::Approx(fd_x(val)).epsilon(1e-8));
  CHECK(phi.partial(0, 1, p) == doctest::Approx(fd_y(val)).epsilon(1e-8));

  auto dx = [&](const Eigen::Vector2d& q) { return phi.partial(1, 0, q); };
  auto dy = [&](const Eigen::Vector2d& q) { return phi.partial(0, 1, q); };
  CHECK(phi.partial(2, 0, p) == doctest::Approx(fd_x(dx)).epsilon(1e-8));
  CHECK(phi.partial(1, 1, p) == doctest::Approx(fd_y(dx)).epsilon(1e-8));
  CHECK(phi.partial(0, 2, p) == doctest::Approx(fd_y(dy)).epsilon(1e-8));

  auto dxx = [&](const Eigen::Vector2d& q) { return phi.partial(2, 0, q); };
  CHECK(phi.partial(3, 0, p) == doctest::Approx(fd_x(dxx)).epsilon(1e-7));

  CHECK(phi.gradient(p).x() == doctest::Approx(phi.partial(1, 0, p)).epsilon(1e-15));
  CHECK(phi.gradient(p).y() == doctest::Approx(phi.partial(0, 1, p)).epsilon(1e-15));
  CHECK(phi.laplacian(p) ==
        doctest::Approx(phi.partial(2, 0, p) + phi.partial(0, 2, p)).epsilon(1e-14));
}

TEST_CASE("conformal scalar curvature matches the finite-difference Laplacian oracle") {
  auto m = wavy_torus();
  ConformalMetric metric(m);
  for (double x : {0.0, 0.9, 2.2, 4.8}) {
    for (double y : {0.4, 1.7, 5.3}) {
      const Eigen::Vector2d p(x, y);
      const double exact = scalar_curvature(m, p);
      const double fd = oracles::fd_scalar_curvature(metric, p, 1e-4);
      CHECK(exact == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  // Known closed form for phi = 0.1 cos x: Sc = 0.2 cos(x) e^{-0.2 cos x}.
  auto cosx = cos_x_torus();
  for (double x : {0.0, 0.5, 1.5, kPi}) {
    const double expect = 0.2 * std::cos(x) * std::exp(-0.2 * std::cos(x));
    CHECK(scalar_curvature(cosx, Eigen::Vector2d(x, 1.0)) ==
          doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("scalar curvature gradient and hessian match finite differences") {
  auto m = wavy_torus();
  const Eigen::Vector2d p(0.8, 1.9);
  const double h = 1e-5;

  auto sc = [&](const Eigen::Vector2d& q) { return scalar_curvature(m, q); };
  const Eigen::Vector2d g = scalar_curvature_gradient(m, p);
  const double gx_fd =
      (sc(Eigen::Vector2d(p.x() + h, p.y())) - sc(Eigen::Vector2d(p.x() - h, p.y()))) / (2 * h);
  const double gy_fd =
      (sc(Eigen::Vector2d(p.x(), p.y() + h)) - sc(Eigen::Vector2d(p.x(), p.y() - h))) / (2 * h);
  CHECK(g.x() == doctest::Approx(gx_fd).epsilon(1e-7));
  CHECK(g.y() == doctest::Approx(gy_fd).epsilon(1e-7));

  auto grad = [&](const Eigen::Vector2d& q) { return scalar_curvature_gradient(m, q); };
  const Eigen::Matrix2d H = scalar_curvature_hessian(m, p);
  const Eigen::Vector2d hx_fd =
      (grad(Eigen::Vector2d(p.x() + h, p.y())) - grad(Eigen::Vector2d(p.x() - h, p.y()))) /
      (2 * h);
  const Eigen::Vector2d hy_fd =
      (grad(Eigen::Vector2d(p.x(), p.y() + h)) - grad(Eigen::Vector2d(p.x(), p.y() - h))) /
      (2 * h);
  CHECK(H(0, 0) == doctest::Approx(hx_fd.x()).epsilon(1e-6));
  CHECK(H(1, 0) == doctest::Approx(hx_fd.y()).epsilon(1e-6));
  CHECK(H(0, 1) == doctest::Approx(hy_fd.x()).epsilon(1e-6));
  CHECK(H(1, 1) == doctest::Approx(hy_fd.y()).epsilon(1e-6));
  CHECK(H(0, 1) == doctest::Approx(H(1, 0)).epsilon(1e-14));

  CHECK_THROWS_AS(scalar_curvature_gradient(ManifoldModel::sphere(1.0), p), ValidationError);
}

TEST_CASE("model describe strings name the kind") {
  CHECK(ManifoldModel::flat_torus({1.0, 2.0}).describe().find("torus") != std::string::npos);
  CHECK(ManifoldModel::sphere(2.0).describe().find("sphere") != std::string::npos);
  CHECK(cos_x_torus().describe().find("conformal") != std::string::npos);
}
