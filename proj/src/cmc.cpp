#include "isoprof/cmc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoprof/fourier.hpp"

namespace isoprof {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pointwise geodesic curvature from the curve point and its first two
// parameter derivatives: kappa_g = e^{-phi} (kappa_euclid + dphi/dn) with n
// the outward euclidean normal (the sign that makes round circles in the
// stereographic sphere chart come out as cot of the geodesic radius).
double curvature_pointwise(const ConformalMetric& metric, const Eigen::Vector2d& g,
                           const Eigen::Vector2d& g1, const Eigen::Vector2d& g2) {
  const double speed2 = g1.squaredNorm();
  const double speed = std::sqrt(speed2);
  if (!(speed > 0.0)) throw SolverError("degenerate tangent while evaluating curvature");
  const double cross = g1.x() * g2.y() - g1.y() * g2.x();
  const double kappa_e = cross / (speed2 * speed);
  const Eigen::Vector2d n_e(g1.y() / speed, -g1.x() / speed);
  const Eigen::Vector2d gp = metric.grad_phi(g);
  return std::exp(-metric.phi(g)) * (kappa_e + gp.dot(n_e));
}

// Segment intersection test for the coarse self-intersection check.
bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                    const Eigen::Vector2d& d) {
  const auto orient = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                         const Eigen::Vector2d& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

// Trig analysis leaves a roundoff floor in every mode; spectral derivatives
// amplify mode m by m (or m^2), so modes below the floor must be dropped or
// they dominate derivatives of smooth sampled curves near the Nyquist mode.
TrigCoefficients analyze_clean(const std::vector<double>& samples, int max_mode) {
  TrigCoefficients c = trig_analyze(samples, max_mode);
  double scale = 1.0;
  for (double s : samples) scale = std::max(scale, std::abs(s));
  const double floor_coef = 3e-14 * scale;
  for (size_t m = 0; m < c.a.size(); ++m) {
    if (std::abs(c.a[m]) < floor_coef) c.a[m] = 0.0;
    if (std::abs(c.b[m]) < floor_coef) c.b[m] = 0.0;
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConformalMetric

ConformalMetric::ConformalMetric(const ManifoldModel& model, int fourier_grid) : model_(model) {
  if (model.kind() == ModelKind::ConformalTorus) {
    lx_ = model.sides()[0];
    ly_ = model.sides()[1];
    phi_ = model.phi();
  } else if (model.kind() == ModelKind::FlatTorus && model.dimension() == 2) {
    lx_ = model.sides()[0];
    ly_ = model.sides()[1];
    phi_ = TrigSeries2D(lx_, ly_, {});
  } else {
    throw ValidationError("ConformalMetric requires a conformal torus or a 2-dimensional flat torus");
  }
  total_volume_ = model.total_volume();
  if (fourier_grid < 16) throw ValidationError("ConformalMetric fourier grid must be at least 16");

  // Fourier coefficients of e^{2 phi} on an N x N periodic grid (row-column
  // transform); the series is used to assemble the area potential.
  const int n = fourier_grid;
  const int kmax = n / 2 - 1;
  std::vector<double> grid(n * n);
  for (int i = 0; i < n; ++i) {
    const double x = lx_ * i / n;
    for (int j = 0; j < n; ++j) {
      const double y = ly_ * j / n;
      grid[i * n + j] = std::exp(2.0 * phi_.value(Eigen::Vector2d(x, y)));
    }
  }
  // temp[i][ky + kmax] = sum_j grid(i, j) e^{-2 pi i ky j / n}
  std::vector<std::complex<double>> temp(static_cast<size_t>(n) * (2 * kmax + 1));
  for (int i = 0; i < n; ++i) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      std::complex<double> sum(0.0, 0.0);
      const double w = -2.0 * kPi * ky / n;
      for (int j = 0; j < n; ++j) {
        sum += grid[i * n + j] * std::complex<double>(std::cos(w * j), std::sin(w * j));
      }
      temp[i * (2 * kmax + 1) + (ky + kmax)] = sum;
    }
  }
  mean_density_ = 0.0;
  std::vector<PotentialMode> modes;
  for (int kx = -kmax; kx <= kmax; ++kx) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      std::complex<double> sum(0.0, 0.0);
      const double w = -2.0 * kPi * kx / n;
      for (int i = 0; i < n; ++i) {
        sum += temp[i * (2 * kmax + 1) + (ky + kmax)] *
               std::complex<double>(std::cos(w * i), std::sin(w * i));
      }
      const std::complex<double> coef = sum / static_cast<double>(n * n);
      if (kx == 0 && ky == 0) {
        mean_density_ = coef.real();
        continue;
      }
      modes.push_back(PotentialMode{2.0 * kPi * kx / lx_, 2.0 * kPi * ky / ly_, coef,
                                    kx != 0 ? 0 : 1});
    }
  }
  // Drop coefficients at roundoff level; the mean term always stays.
  const double cut = 3e-16 * std::abs(mean_density_);
  for (const PotentialMode& m : modes) {
    if (std::abs(m.coef) > cut) potential_modes_.push_back(m);
  }
}

double ConformalMetric::phi(const Eigen::Vector2d& p) const { return phi_.value(p); }

Eigen::Vector2d ConformalMetric::grad_phi(const Eigen::Vector2d& p) const {
  return phi_.gradient(p);
}

Eigen::Matrix2d ConformalMetric::hessian_phi(const Eigen::Vector2d& p) const {
  Eigen::Matrix2d h;
  h(0, 0) = phi_.partial(2, 0, p);
  h(0, 1) = phi_.partial(1, 1, p);
  h(1, 0) = h(0, 1);
  h(1, 1) = phi_.partial(0, 2, p);
  return h;
}

double ConformalMetric::density(const Eigen::Vector2d& p) const {
  return std::exp(2.0 * phi_.value(p));
}

double ConformalMetric::scalar_curvature(const Eigen::Vector2d& p) const {
  return -2.0 * std::exp(-2.0 * phi_.value(p)) * phi_.laplacian(p);
}

Eigen::Vector2d ConformalMetric::area_potential(const Eigen::Vector2d& p,
                                                const Eigen::Vector2d& p0) const {
  // Secular part: divergence of mean * (p - p0) / 2 equals the mean density.
  Eigen::Vector2d f = 0.5 * mean_density_ * (p - p0);
  for (const PotentialMode& m : potential_modes_) {
    const double z = m.kx_freq * p.x() + m.ky_freq * p.y();
    const std::complex<double> e(std::cos(z), std::sin(z));
    const double freq = (m.axis == 0) ? m.kx_freq : m.ky_freq;
    // antiderivative of coef e^{i z} along the chosen axis
    const std::complex<double> val = m.coef * e / std::complex<double>(0.0, freq);
    f[m.axis] += val.real();
  }
  return f;
}

Eigen::Vector2d ConformalMetric::snap_to_fundamental_domain(const Eigen::Vector2d& p) const {
  double x = std::fmod(p.x(), lx_);
  double y = std::fmod(p.y(), ly_);
  if (x < 0.0) x += lx_;
  if (y < 0.0) y += ly_;
  return Eigen::Vector2d(x, y);
}

// ---------------------------------------------------------------------------
// PseudoBall

double PseudoBall::radial(double theta) const {
  double x = 0.0;
  for (size_t m = 2; m < x_cos.size(); ++m) {
    x += x_cos[m] * std::cos(m * theta) + x_sin[m] * std::sin(m * theta);
  }
  return r * (1.0 + x);
}

Eigen::Vector2d PseudoBall::point(double theta) const {
  const double u = radial(theta);
  return center + u * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

std::vector<Eigen::Vector2d> pseudo_ball_curve(const PseudoBall& ball, int n) {
  if (n < 8) throw ValidationError("pseudo_ball_curve needs at least 8 samples");
  std::vector<Eigen::Vector2d> out(n);
  for (int j = 0; j < n; ++j) out[j] = ball.point(2.0 * kPi * j / n);
  return out;
}

// ---------------------------------------------------------------------------
// Sample-based operations

std::vector<double> geodesic_curvature(const ConformalMetric& metric,
                                       const std::vector<Eigen::Vector2d>& samples) {
  const int K = static_cast<int>(samples.size());
  if (K < 16) throw ValidationError("geodesic_curvature needs at least 16 samples");
  std::vector<double> xs(K), ys(K);
  for (int j = 0; j < K; ++j) {
    xs[j] = samples[j].x();
    ys[j] = samples[j].y();
  }
  const int max_mode = (K - 1) / 2;
  const TrigCoefficients cx = analyze_clean(xs, max_mode);
  const TrigCoefficients cy = analyze_clean(ys, max_mode);
  const std::vector<double> x1 = trig_eval_grid(cx, K, 1);
  const std::vector<double> y1 = trig_eval_grid(cy, K, 1);
  const std::vector<double> x2 = trig_eval_grid(cx, K, 2);
  const std::vector<double> y2 = trig_eval_grid(cy, K, 2);
  std::vector<double> kappa(K);
  for (int j = 0; j < K; ++j) {
    kappa[j] = curvature_pointwise(metric, samples[j], Eigen::Vector2d(x1[j], y1[j]),
                                   Eigen::Vector2d(x2[j], y2[j]));
  }
  return kappa;
}

std::pair<double, double> riemannian_measures(const ConformalMetric& metric,
                                              const std::vector<Eigen::Vector2d>& samples) {
  const int K = static_cast<int>(samples.size());
  if (K < 16) throw ValidationError("riemannian_measures needs at least 16 samples");

  // Coarse winding check: a simple closed curve has no crossing chords.
  {
    const int n = std::min(64, K);
    std::vector<Eigen::Vector2d> poly(n);
    for (int i = 0; i < n; ++i) poly[i] = samples[static_cast<size_t>(i) * K / n];
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
          throw ValidationError("riemannian_measures: self-intersecting curve");
        }
      }
    }
  }

  std::vector<double> xs(K), ys(K);
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (int j = 0; j < K; ++j) {
    xs[j] = samples[j].x();
    ys[j] = samples[j].y();
    centroid += samples[j];
  }
  centroid /= K;
  const int max_mode = (K - 1) / 2;
  const TrigCoefficients cx = analyze_clean(xs, max_mode);
  const TrigCoefficients cy = analyze_clean(ys, max_mode);
  const std::vector<double> x1 = trig_eval_grid(cx, K, 1);
  const std::vector<double> y1 = trig_eval_grid(cy, K, 1);

  double signed_area = 0.0;
  for (int j = 0; j < K; ++j) signed_area += xs[j] * y1[j] - ys[j] * x1[j];
  signed_area *= 0.5 * (2.0 * kPi / K);
  if (!(signed_area > 0.0)) {
    throw ValidationError("riemannian_measures: curve must be positively oriented");
  }

  double w = 0.0;
  double v = 0.0;
  for (int j = 0; j < K; ++j) {
    const Eigen::Vector2d g(xs[j], ys[j]);
    const double speed = std::hypot(x1[j], y1[j]);
    w += std::exp(metric.phi(g)) * speed;
    const Eigen::Vector2d f = metric.area_potential(g, centroid);
    v += f.x() * y1[j] - f.y() * x1[j];
  }
  const double dtheta = 2.0 * kPi / K;
  return {v * dtheta, w * dtheta};
}

// ---------------------------------------------------------------------------
// Pseudo-ball Newton solve

namespace {

struct SolveWorkspace {
  int M;   // highest mode
  int K;   // collocation nodes
  int nc;  // graph coefficient count: 2 (M - 1)
  std::vector<double> theta, ct, st;               // nodes, cos, sin
  Eigen::MatrixXd B0, B1, B2;                      // K x nc basis values/derivatives
  Eigen::MatrixXd P;                               // (2M-1) x K projection rows
  Eigen::MatrixXd Bres;                            // K x (2M-1) residual synthesis
};

SolveWorkspace make_workspace(int M, int K) {
  SolveWorkspace ws;
  ws.M = M;
  ws.K = K;
  ws.nc = 2 * (M - 1);
  ws.theta.resize(K);
  ws.ct.resize(K);
  ws.st.resize(K);
  for (int j = 0; j < K; ++j) {
    ws.theta[j] = 2.0 * kPi * j / K;
    ws.ct[j] = std::cos(ws.theta[j]);
    ws.st[j] = std::sin(ws.theta[j]);
  }
  ws.B0.resize(K, ws.nc);
  ws.B1.resize(K, ws.nc);
  ws.B2.resize(K, ws.nc);
  for (int m = 2; m <= M; ++m) {
    for (int j = 0; j < K; ++j) {
      const double c = std::cos(m * ws.theta[j]);
      const double s = std::sin(m * ws.theta[j]);
      const int ic = m - 2;            // cos block
      const int is = (M - 1) + m - 2;  // sin block
      ws.B0(j, ic) = c;
      ws.B1(j, ic) = -m * s;
      ws.B2(j, ic) = -m * m * c;
      ws.B0(j, is) = s;
      ws.B1(j, is) = m * c;
      ws.B2(j, is) = -m * m * s;
    }
  }
  const int ne = 2 * M - 1;  // mean + cos/sin for m = 2..M
  ws.P.resize(ne, K);
  ws.Bres.resize(K, ne);
  for (int j = 0; j < K; ++j) {
    ws.P(0, j) = 1.0 / K;
    ws.Bres(j, 0) = 1.0;
  }
  for (int m = 2; m <= M; ++m) {
    for (int j = 0; j < K; ++j) {
      const double c = std::cos(m * ws.theta[j]);
      const double s = std::sin(m * ws.theta[j]);
      ws.P(1 + (m - 2), j) = 2.0 * c / K;
      ws.P(M + (m - 2), j) = 2.0 * s / K;
      ws.Bres(j, 1 + (m - 2)) = c;
      ws.Bres(j, M + (m - 2)) = s;
    }
  }
  return ws;
}

struct CurveFields {
  Eigen::VectorXd kappa;      // geodesic curvature at nodes
  Eigen::VectorXd du, ddu, dddu;  // d kappa / d(u, u', u'') at nodes
  double min_graph = 0.0;     // min over nodes of 1 + x
  double max_radius = 0.0;    // max over nodes of u
};

// Evaluate curvature and its variational coefficients along the graph
// u(theta) = r (1 + x(theta)) about the center p.
CurveFields evaluate_fields(const ConformalMetric& metric, const SolveWorkspace& ws,
                            const Eigen::Vector2d& p, double r, const Eigen::VectorXd& coeffs,
                            bool with_derivatives) {
  const int K = ws.K;
  const Eigen::VectorXd xv = ws.B0 * coeffs;
  const Eigen::VectorXd xd = ws.B1 * coeffs;
  const Eigen::VectorXd xdd = ws.B2 * coeffs;
  CurveFields f;
  f.kappa.resize(K);
  if (with_derivatives) {
    f.du.resize(K);
    f.ddu.resize(K);
    f.dddu.resize(K);
  }
  f.min_graph = 1.0 + xv.minCoeff();
  f.max_radius = 0.0;
  for (int j = 0; j < K; ++j) {
    const double u = r * (1.0 + xv[j]);
    const double up = r * xd[j];
    const double upp = r * xdd[j];
    f.max_radius = std::max(f.max_radius, u);
    const Eigen::Vector2d er(ws.ct[j], ws.st[j]);
    const Eigen::Vector2d et(-ws.st[j], ws.ct[j]);
    const Eigen::Vector2d g = p + u * er;
    const double phi = metric.phi(g);
    const Eigen::Vector2d gp = metric.grad_phi(g);
    const double E = std::exp(-phi);
    const double D = u * u + up * up;
    const double W = std::sqrt(D);
    const double S = u * u + 2.0 * up * up - u * upp;
    const double G = gp.dot(u * er - up * et);
    const double kappa = E * (S / (D * W) + G / W);
    f.kappa[j] = kappa;
    if (!with_derivatives) continue;
    const Eigen::Matrix2d hp = metric.hessian_phi(g);
    const double dphi_du = gp.dot(er);
    const double dG_du = (hp * er).dot(u * er - up * et) + gp.dot(er);
    const double dG_dup = -gp.dot(et);
    const double D32 = D * W;
    const double D52 = D * D * W;
    f.du[j] = E * (-dphi_du * (S / D32 + G / W) + (2.0 * u - upp) / D32 - 3.0 * u * S / D52 +
                   dG_du / W - u * G / D32);
    f.ddu[j] = E * (4.0 * up / D32 - 3.0 * up * S / D52 + dG_dup / W - up * G / D32);
    f.dddu[j] = E * (-u) / D32;
  }
  return f;
}

// Projected residual coefficients [mean - h, cos_m, sin_m (m = 2..M)] and its
// sup-norm over the collocation nodes.
std::pair<Eigen::VectorXd, double> projected_residual(const SolveWorkspace& ws,
                                                      const Eigen::VectorXd& kappa, double h) {
  Eigen::VectorXd rnode = kappa.array() - h;
  Eigen::VectorXd fc = ws.P * rnode;
  const Eigen::VectorXd synth = ws.Bres * fc;
  return {fc, synth.cwiseAbs().maxCoeff()};
}

// Riemannian measures of the solved graph, by trapezoid in theta and the area
// potential line integral.
std::pair<double, double> graph_measures(const ConformalMetric& metric, const SolveWorkspace& ws,
                                         const Eigen::Vector2d& p, double r,
                                         const Eigen::VectorXd& coeffs) {
  const int K = ws.K;
  const Eigen::VectorXd xv = ws.B0 * coeffs;
  const Eigen::VectorXd xd = ws.B1 * coeffs;
  double w = 0.0, v = 0.0;
  for (int j = 0; j < K; ++j) {
    const double u = r * (1.0 + xv[j]);
    const double up = r * xd[j];
    const Eigen::Vector2d er(ws.ct[j], ws.st[j]);
    const Eigen::Vector2d et(-ws.st[j], ws.ct[j]);
    const Eigen::Vector2d g = p + u * er;
    const Eigen::Vector2d g1 = up * er + u * et;
    w += std::exp(metric.phi(g)) * g1.norm();
    const Eigen::Vector2d f = metric.area_potential(g, p);
    v += f.x() * g1.y() - f.y() * g1.x();
  }
  const double dtheta = 2.0 * kPi / K;
  return {v * dtheta, w * dtheta};
}

}  // namespace

PseudoBall solve_pseudo_ball(const ConformalMetric& metric, const Eigen::Vector2d& center,
                             double r, const SolveOptions& opts, const PseudoBall* warm_start) {
  const double side = metric.min_side();
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("pseudo-ball radius must be positive");
  if (r < opts.r_min_frac * side) {
    std::ostringstream os;
    os << "pseudo-ball radius " << r << " below conditioning floor " << opts.r_min_frac * side;
    throw ValidationError(os.str());
  }
  if (r > opts.r_max_frac * side) {
    std::ostringstream os;
    os << "pseudo-ball radius " << r << " above embedding bound " << opts.r_max_frac * side;
    throw ValidationError(os.str());
  }
  if (opts.modes < 4) throw ValidationError("pseudo-ball solve needs modes >= 4");
  if (opts.collocation < 2 * opts.modes + 2) {
    throw ValidationError("pseudo-ball solve needs collocation >= 2*modes + 2");
  }

  const Eigen::Vector2d p = metric.snap_to_fundamental_domain(center);
  const int M = opts.modes;
  const int K = opts.collocation;
  const SolveWorkspace ws = make_workspace(M, K);
  const int nc = ws.nc;
  const int ne = 2 * M - 1;

  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(nc);
  double h = std::exp(-metric.phi(p)) / r;
  if (warm_start != nullptr && warm_start->x_cos.size() >= 3) {
    const int wm = static_cast<int>(warm_start->x_cos.size()) - 1;
    for (int m = 2; m <= std::min(M, wm); ++m) {
      coeffs[m - 2] = warm_start->x_cos[m];
      coeffs[(M - 1) + m - 2] = warm_start->x_sin[m];
    }
    if (warm_start->h > 0.0 && std::abs(warm_start->r - r) < 0.5 * r) h = warm_start->h * warm_start->r / r;
  }

  CurveFields fields = evaluate_fields(metric, ws, p, r, coeffs, true);
  if (fields.min_graph <= 0.0) throw SolverError("pseudo-ball warm start is not a graph");
  auto [fc, res] = projected_residual(ws, fields.kappa, h);

  // Iterate past opts.tol down to the roundoff floor: a few polish steps
  // make the landing point independent of the starting guess, so warm and
  // cold starts agree to machine precision.
  int iterations = 0;
  int polish_left = 3;
  const double res_floor = 1e-14 * std::max(1.0, std::abs(h));
  while (res > opts.tol || polish_left > 0) {
    if (res <= res_floor) break;
    if (res <= opts.tol) --polish_left;
    if (iterations >= opts.max_iterations) {
      if (res <= opts.tol) break;
      std::ostringstream os;
      os << "pseudo-ball Newton did not converge at center (" << p.x() << ", " << p.y()
         << "), r = " << r << ": residual " << res;
      throw SolverError(os.str());
    }
    ++iterations;

    // J = [P (dkappa/dcoeffs) | dR/dh], analytic variational coefficients.
    Eigen::MatrixXd nmat = fields.du.asDiagonal() * ws.B0;
    nmat += fields.ddu.asDiagonal() * ws.B1;
    nmat += fields.dddu.asDiagonal() * ws.B2;
    nmat *= r;
    Eigen::MatrixXd jac(ne, nc + 1);
    jac.leftCols(nc) = ws.P * nmat;
    jac.col(nc).setZero();
    jac(0, nc) = -1.0;

    const Eigen::VectorXd step = jac.partialPivLu().solve(-fc);

    // Damped update: accept the longest step in {1, 1/2, ...} that stays a
    // graph and strictly decreases the residual.
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving, scale *= 0.5) {
      const Eigen::VectorXd cand = coeffs + scale * step.head(nc);
      const double hcand = h + scale * step[nc];
      CurveFields cf = evaluate_fields(metric, ws, p, r, cand, true);
      if (cf.min_graph <= 0.0) continue;
      auto [fc2, res2] = projected_residual(ws, cf.kappa, hcand);
      if (res2 < res) {
        coeffs = cand;
        h = hcand;
        fields = std::move(cf);
        fc = fc2;
        res = res2;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (res <= opts.tol) break;
      std::ostringstream os;
      os << "pseudo-ball Newton stagnated at center (" << p.x() << ", " << p.y()
         << "), r = " << r << ": residual " << res;
      throw SolverError(os.str());
    }
  }

  if (!(fields.max_radius < 0.5 * side)) {
    throw SolverError("pseudo-ball curve leaves the embedding neighborhood");
  }

  PseudoBall ball;
  ball.center = p;
  ball.r = r;
  ball.h = h;
  ball.x_cos.assign(M + 1, 0.0);
  ball.x_sin.assign(M + 1, 0.0);
  for (int m = 2; m <= M; ++m) {
    ball.x_cos[m] = coeffs[m - 2];
    ball.x_sin[m] = coeffs[(M - 1) + m - 2];
  }
  ball.residual_norm = res;
  ball.curvature_deviation = (fields.kappa.array() - h).abs().maxCoeff();
  ball.collocation = K;
  ball.iterations = iterations;
  const auto [v, w] = graph_measures(metric, ws, p, r, coeffs);
  ball.v = v;
  ball.w = w;
  return ball;
}

std::pair<double, double> omega_map(const ConformalMetric& metric, const Eigen::Vector2d& center,
                                    double r, const SolveOptions& opts) {
  const PseudoBall ball = solve_pseudo_ball(metric, center, r, opts);
  return {ball.v, ball.w};
}

namespace {

// One volume target: secant iteration on r around the current seed.
PseudoBall solve_at_volume(const ConformalMetric& metric, const Eigen::Vector2d& center,
                           double target, const SolveOptions& opts, const PseudoBall* seed) {
  const double side = metric.min_side();
  const double r_lo = opts.r_min_frac * side;
  const double r_hi = opts.r_max_frac * side;
  const double vtol = opts.volume_match_rel * metric.total_volume();

  double r0;
  if (seed != nullptr && seed->v > 0.0) {
    r0 = seed->r * std::sqrt(target / seed->v);
  } else {
    r0 = std::sqrt(target / kPi) * std::exp(-metric.phi(metric.snap_to_fundamental_domain(center)));
  }
  r0 = std::clamp(r0, r_lo, r_hi);

  PseudoBall a = solve_pseudo_ball(metric, center, r0, opts, seed);
  if (std::abs(a.v - target) <= vtol) return a;

  // First slope from the flat model, then secant.
  double slope = 2.0 * kPi * a.r * metric.density(a.center);
  for (int it = 0; it < 60; ++it) {
    double rb = a.r + (target - a.v) / slope;
    const double max_move = 0.25 * a.r;
    rb = std::clamp(rb, a.r - max_move, a.r + max_move);
    rb = std::clamp(rb, r_lo, r_hi);
    if (rb == a.r) throw SolverError("volume continuation pinned at the radius bounds");
    PseudoBall b = solve_pseudo_ball(metric, center, rb, opts, &a);
    slope = (b.v - a.v) / (b.r - a.r);
    a = std::move(b);
    if (std::abs(a.v - target) <= vtol) return a;
    if (!(slope > 0.0)) throw SolverError("volume continuation lost monotonicity in r");
  }
  throw SolverError("volume continuation did not reach the target volume");
}

}  // namespace

std::vector<PseudoBall> continue_in_volume(const ConformalMetric& metric,
                                           const Eigen::Vector2d& center,
                                           const std::vector<double>& target_volumes,
                                           const SolveOptions& opts) {
  if (target_volumes.empty()) return {};
  for (size_t i = 0; i < target_volumes.size(); ++i) {
    if (!(target_volumes[i] > 0.0)) {
      throw ValidationError("continuation volumes must be positive");
    }
    if (i > 0 && !(target_volumes[i] > target_volumes[i - 1])) {
      throw ValidationError("continuation volumes must be sorted strictly ascending");
    }
  }

  std::vector<PseudoBall> out;
  out.reserve(target_volumes.size());
  PseudoBall current;
  bool have_current = false;

  for (double target : target_volumes) {
    const double base = have_current ? current.v : 0.0;
    const double full_step = target - base;
    // Walk toward the target, halving the volume step on solver failure.
    double reached = base;
    while (reached < target) {
      double step = target - reached;
      PseudoBall next;
      for (;;) {
        try {
          next = solve_at_volume(metric, center, reached + step, opts,
                                 have_current ? &current : nullptr);
          break;
        } catch (const SolverError&) {
          step *= 0.5;
          if (step < 1e-6 * std::abs(full_step)) {
            std::ostringstream os;
            os << "continuation failure at center (" << center.x() << ", " << center.y()
               << "): volume step collapsed below 1e-6 of " << full_step;
            throw SolverError(os.str());
          }
        }
      }
      current = std::move(next);
      have_current = true;
      reached = current.v;
      if (std::abs(reached - target) <= opts.volume_match_rel * metric.total_volume()) break;
    }
    out.push_back(current);
  }
  return out;
}

}  // namespace isoprof
