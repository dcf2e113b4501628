#include "isoprof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace isoprof {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Canonical sign for a frequency pair: kx > 0, or kx == 0 and ky >= 0.
// Negating the pair keeps the cosine term and flips the sine term.
PhiMode normalize_mode(PhiMode m) {
  if (m.kx < 0 || (m.kx == 0 && m.ky < 0)) {
    m.kx = -m.kx;
    m.ky = -m.ky;
    m.sin_coef = -m.sin_coef;
  }
  return m;
}

}  // namespace

TrigSeries2D::TrigSeries2D(double period_x, double period_y, std::vector<PhiMode> modes)
    : period_x_(period_x), period_y_(period_y), modes_(std::move(modes)) {}

double TrigSeries2D::value(const Eigen::Vector2d& p) const {
  return partial(0, 0, p);
}

double TrigSeries2D::partial(int ox, int oy, const Eigen::Vector2d& p) const {
  const double ax = 2.0 * kPi / period_x_;
  const double ay = 2.0 * kPi / period_y_;
  const int phase = (ox + oy) % 4;
  double sum = 0.0;
  for (const PhiMode& m : modes_) {
    const double alpha = ax * m.kx;
    const double beta = ay * m.ky;
    double factor = 1.0;
    for (int i = 0; i < ox; ++i) factor *= alpha;
    for (int i = 0; i < oy; ++i) factor *= beta;
    if (factor == 0.0) continue;
    const double z = alpha * p.x() + beta * p.y();
    const double c = std::cos(z);
    const double s = std::sin(z);
    // d^n/dz^n (a cos z + b sin z), n mod 4 cycle.
    double term = 0.0;
    switch (phase) {
      case 0: term = m.cos_coef * c + m.sin_coef * s; break;
      case 1: term = -m.cos_coef * s + m.sin_coef * c; break;
      case 2: term = -m.cos_coef * c - m.sin_coef * s; break;
      case 3: term = m.cos_coef * s - m.sin_coef * c; break;
    }
    sum += factor * term;
  }
  return sum;
}

Eigen::Vector2d TrigSeries2D::gradient(const Eigen::Vector2d& p) const {
  return Eigen::Vector2d(partial(1, 0, p), partial(0, 1, p));
}

double TrigSeries2D::laplacian(const Eigen::Vector2d& p) const {
  return partial(2, 0, p) + partial(0, 2, p);
}

ManifoldModel ManifoldModel::flat_torus(std::vector<double> sides) {
  if (sides.size() < 2) {
    throw ValidationError("flat torus needs at least 2 side lengths");
  }
  for (double s : sides) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ValidationError("flat torus side lengths must be strictly positive");
    }
  }
  std::sort(sides.begin(), sides.end());
  ManifoldModel m;
  m.kind_ = ModelKind::FlatTorus;
  m.dimension_ = static_cast<int>(sides.size());
  m.sides_ = std::move(sides);
  m.total_volume_ = 1.0;
  for (double s : m.sides_) m.total_volume_ *= s;
  return m;
}

ManifoldModel ManifoldModel::sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("sphere radius must be strictly positive");
  }
  ManifoldModel m;
  m.kind_ = ModelKind::RoundSphere;
  m.dimension_ = 2;
  m.radius_ = radius;
  m.total_volume_ = 4.0 * kPi * radius * radius;
  return m;
}

ManifoldModel ManifoldModel::conformal_torus(double lx, double ly, std::vector<PhiMode> modes,
                                             int quadrature_grid) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw ValidationError("conformal torus side lengths must be strictly positive");
  }
  if (quadrature_grid < 16) {
    throw ValidationError("conformal torus quadrature grid must be at least 16");
  }
  // Canonicalise to lx <= ly by swapping coordinates.
  if (lx > ly) {
    std::swap(lx, ly);
    for (PhiMode& m : modes) std::swap(m.kx, m.ky);
  }
  std::set<std::pair<int, int>> seen;
  for (PhiMode& m : modes) {
    if (!std::isfinite(m.cos_coef) || !std::isfinite(m.sin_coef)) {
      throw ValidationError("conformal coefficient is not finite");
    }
    m = normalize_mode(m);
    if (!seen.insert({m.kx, m.ky}).second) {
      std::ostringstream os;
      os << "duplicate frequency pair (" << m.kx << ", " << m.ky << ") after sign normalization";
      throw ValidationError(os.str());
    }
  }
  ManifoldModel m;
  m.kind_ = ModelKind::ConformalTorus;
  m.dimension_ = 2;
  m.sides_ = {lx, ly};
  m.phi_ = TrigSeries2D(lx, ly, std::move(modes));
  // Trapezoid rule on the periodic cell; spectrally accurate for the analytic
  // integrand e^{2 phi}.
  const int n = quadrature_grid;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lx * i / n;
    for (int j = 0; j < n; ++j) {
      const double y = ly * j / n;
      sum += std::exp(2.0 * m.phi_.value(Eigen::Vector2d(x, y)));
    }
  }
  m.total_volume_ = sum * (lx / n) * (ly / n);
  return m;
}

const std::vector<double>& ManifoldModel::sides() const {
  if (kind_ == ModelKind::RoundSphere) {
    throw ValidationError("sides() is undefined for a sphere model");
  }
  return sides_;
}

double ManifoldModel::min_side() const { return sides().front(); }

double ManifoldModel::radius() const {
  if (kind_ != ModelKind::RoundSphere) {
    throw ValidationError("radius() requires a sphere model");
  }
  return radius_;
}

const TrigSeries2D& ManifoldModel::phi() const {
  if (kind_ != ModelKind::ConformalTorus) {
    throw ValidationError("phi() requires a conformal torus model");
  }
  return phi_;
}

std::string ManifoldModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ModelKind::FlatTorus: {
      os << "flat torus, sides (";
      for (size_t i = 0; i < sides_.size(); ++i) os << (i ? ", " : "") << sides_[i];
      os << ")";
      break;
    }
    case ModelKind::RoundSphere:
      os << "round sphere, radius " << radius_;
      break;
    case ModelKind::ConformalTorus:
      os << "conformal torus, sides (" << sides_[0] << ", " << sides_[1] << "), "
         << phi_.modes().size() << " phi mode(s)";
      break;
  }
  return os.str();
}

ConformalData conformal_data(const ManifoldModel& model, const Eigen::Vector2d& p) {
  if (model.kind() != ModelKind::ConformalTorus) {
    throw ValidationError("conformal_data requires a conformal torus model");
  }
  const TrigSeries2D& phi = model.phi();
  ConformalData d;
  d.phi = phi.value(p);
  d.grad = phi.gradient(p);
  d.laplacian = phi.laplacian(p);
  return d;
}

double scalar_curvature(const ManifoldModel& model, const Eigen::Vector2d& p) {
  switch (model.kind()) {
    case ModelKind::FlatTorus:
      return 0.0;
    case ModelKind::RoundSphere:
      return 2.0 / (model.radius() * model.radius());
    case ModelKind::ConformalTorus: {
      const ConformalData d = conformal_data(model, p);
      return -2.0 * std::exp(-2.0 * d.phi) * d.laplacian;
    }
  }
  return 0.0;
}

Eigen::Vector2d scalar_curvature_gradient(const ManifoldModel& model, const Eigen::Vector2d& p) {
  if (model.kind() != ModelKind::ConformalTorus) {
    throw ValidationError("scalar_curvature_gradient requires a conformal torus model");
  }
  const TrigSeries2D& phi = model.phi();
  const double e = std::exp(-2.0 * phi.value(p));
  const double fx = phi.partial(1, 0, p);
  const double fy = phi.partial(0, 1, p);
  const double lap = phi.laplacian(p);
  const double lap_x = phi.partial(3, 0, p) + phi.partial(1, 2, p);
  const double lap_y = phi.partial(2, 1, p) + phi.partial(0, 3, p);
  return Eigen::Vector2d(-2.0 * e * (lap_x - 2.0 * fx * lap),
                         -2.0 * e * (lap_y - 2.0 * fy * lap));
}

Eigen::Matrix2d scalar_curvature_hessian(const ManifoldModel& model, const Eigen::Vector2d& p) {
  if (model.kind() != ModelKind::ConformalTorus) {
    throw ValidationError("scalar_curvature_hessian requires a conformal torus model");
  }
  const TrigSeries2D& phi = model.phi();
  const double e = std::exp(-2.0 * phi.value(p));
  const double fx = phi.partial(1, 0, p);
  const double fy = phi.partial(0, 1, p);
  const double fxx = phi.partial(2, 0, p);
  const double fxy = phi.partial(1, 1, p);
  const double fyy = phi.partial(0, 2, p);
  const double lap = fxx + fyy;
  const double lap_x = phi.partial(3, 0, p) + phi.partial(1, 2, p);
  const double lap_y = phi.partial(2, 1, p) + phi.partial(0, 3, p);
  const double lap_xx = phi.partial(4, 0, p) + phi.partial(2, 2, p);
  const double lap_xy = phi.partial(3, 1, p) + phi.partial(1, 3, p);
  const double lap_yy = phi.partial(2, 2, p) + phi.partial(0, 4, p);
  Eigen::Matrix2d h;
  h(0, 0) = -2.0 * e * (lap_xx - 4.0 * fx * lap_x - 2.0 * fxx * lap + 4.0 * fx * fx * lap);
  h(0, 1) = -2.0 * e * (lap_xy - 2.0 * fy * lap_x - 2.0 * fx * lap_y - 2.0 * fxy * lap +
                        4.0 * fx * fy * lap);
  h(1, 0) = h(0, 1);
  h(1, 1) = -2.0 * e * (lap_yy - 4.0 * fy * lap_y - 2.0 * fyy * lap + 4.0 * fy * fy * lap);
  return h;
}

double unit_ball_volume(int n) {
  if (n < 1) throw ValidationError("unit_ball_volume requires n >= 1");
  if (n == 1) return 2.0;
  if (n == 2) return kPi;
  return unit_ball_volume(n - 2) * 2.0 * kPi / n;
}

double profile_leading_coefficient(int n) {
  return n * std::pow(unit_ball_volume(n), 1.0 / n);
}

}  // namespace isoprof
