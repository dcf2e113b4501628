#include "isoprof/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace isoprof {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double euclidean_profile(int n, double v) {
  if (n < 1) throw ValidationError("euclidean_profile needs dimension >= 1");
  if (v < 0.0) throw ValidationError("euclidean_profile needs v >= 0");
  if (v == 0.0) return 0.0;
  return n * std::pow(unit_ball_volume(n), 1.0 / n) * std::pow(v, double(n - 1) / n);
}

ExpansionModel ExpansionModel::make(int n, double sc) {
  if (n < 2) throw ValidationError("expansion model needs dimension >= 2");
  ExpansionModel m;
  m.n = n;
  m.sc = sc;
  m.omega_n = unit_ball_volume(n);
  m.c_n = profile_leading_coefficient(n);
  return m;
}

double ExpansionModel::coefficient() const {
  return -sc / (2.0 * n * (n + 2) * std::pow(omega_n, 2.0 / n));
}

double ExpansionModel::operator()(double rho) const {
  if (rho < 0.0) throw ValidationError("expansion evaluated at negative rho");
  return c_n * std::pow(rho, n - 1) * (1.0 + coefficient() * rho * rho);
}

double expansion_predict(const ManifoldModel& model, const Eigen::Vector2d& p, double rho) {
  return ExpansionModel::make(model.dimension(), scalar_curvature(model, p))(rho);
}

double fit_expansion_coefficient(const std::vector<std::pair<double, double>>& rho_and_w, int n) {
  if (rho_and_w.size() < 3) throw ValidationError("expansion fit needs at least 3 samples");
  const double c_n = profile_leading_coefficient(n);

  const int m = static_cast<int>(rho_and_w.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const auto [rho, w] = rho_and_w[i];
    if (!(rho > 0.0)) throw ValidationError("expansion fit needs rho > 0");
    if (!(w > 0.0)) throw ValidationError("expansion fit needs positive boundary volumes");
    const double rho2 = rho * rho;
    y(i) = (w / (c_n * std::pow(rho, n - 1)) - 1.0) / rho2;
    A(i, 0) = 1.0;
    A(i, 1) = rho2;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < 2) throw ValidationError("expansion fit design matrix is degenerate");
  const Eigen::Vector2d coef = qr.solve(y);
  return coef(0);
}

namespace {

// Boundary length at exactly the requested volume: first-order volume
// matching removes the continuation tolerance from the objective.
double profile_objective(const ConformalMetric& metric, const Eigen::Vector2d& center,
                         double volume, const SolveOptions& solve) {
  const std::vector<PseudoBall> balls = continue_in_volume(metric, center, {volume}, solve);
  const PseudoBall& b = balls.front();
  return b.w + b.h * (volume - b.v);
}

double golden_section(const std::function<double(double)>& f, double a, double b, int steps,
                      double* best_x) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double bx = f1 < f2 ? x1 : x2;
  double bf = std::min(f1, f2);
  for (int i = 0; i < steps; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    if (f1 < bf) bf = f1, bx = x1;
    if (f2 < bf) bf = f2, bx = x2;
  }
  *best_x = bx;
  return bf;
}

}  // namespace

std::vector<SmallProfileSample> small_volume_profile(const ConformalMetric& metric,
                                                     const std::vector<double>& volumes,
                                                     const SmallProfileOptions& opts) {
  if (volumes.empty()) throw ValidationError("small_volume_profile needs volumes");
  if (opts.centers_x < 1 || opts.centers_y < 1) {
    throw ValidationError("small_volume_profile needs a nonempty center grid");
  }
  std::vector<double> vols = volumes;
  std::sort(vols.begin(), vols.end());
  if (!(vols.front() > 0.0)) throw ValidationError("small_volume_profile needs positive volumes");
  if (std::adjacent_find(vols.begin(), vols.end()) != vols.end()) {
    throw ValidationError("small_volume_profile volumes must be distinct");
  }

  const int nv = static_cast<int>(vols.size());
  std::vector<Eigen::Vector2d> centers;
  for (int j = 0; j < opts.centers_y; ++j) {
    for (int i = 0; i < opts.centers_x; ++i) {
      centers.emplace_back(metric.lx() * i / opts.centers_x, metric.ly() * j / opts.centers_y);
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<SmallProfileSample> out(nv);
  std::vector<int> fails(nv, 0);
  for (int k = 0; k < nv; ++k) {
    out[k].v = vols[k];
    out[k].w = inf;
  }
  for (const Eigen::Vector2d& c : centers) {
    try {
      const std::vector<PseudoBall> balls = continue_in_volume(metric, c, vols, opts.solve);
      for (int k = 0; k < nv; ++k) {
        const double w = balls[k].w + balls[k].h * (vols[k] - balls[k].v);
        if (w < out[k].w) {
          out[k].w = w;
          out[k].center = c;
        }
      }
    } catch (const SolverError&) {
      for (int k = 0; k < nv; ++k) ++fails[k];
    }
  }
  for (int k = 0; k < nv; ++k) {
    out[k].failed_centers = fails[k];
    if (!(out[k].w < inf)) {
      std::ostringstream os;
      os << "small_volume_profile: every center failed at volume " << vols[k];
      throw SolverError(os.str());
    }
  }

  if (opts.refine) {
    const double hx = metric.lx() / opts.centers_x;
    const double hy = metric.ly() / opts.centers_y;
    for (int k = 0; k < nv; ++k) {
      Eigen::Vector2d p = out[k].center;
      const auto value = [&](const Eigen::Vector2d& q) {
        try {
          return profile_objective(metric, q, vols[k], opts.solve);
        } catch (const SolverError&) {
          return inf;
        }
      };
      double bx = p.x();
      double wx = golden_section([&](double x) { return value({x, p.y()}); }, p.x() - hx,
                                 p.x() + hx, opts.refine_steps, &bx);
      if (wx < out[k].w) {
        out[k].w = wx;
        out[k].center = {bx, p.y()};
      }
      p = out[k].center;
      double by = p.y();
      double wy = golden_section([&](double y) { return value({p.x(), y}); }, p.y() - hy,
                                 p.y() + hy, opts.refine_steps, &by);
      if (wy < out[k].w) {
        out[k].w = wy;
        out[k].center = {p.x(), by};
      }
      out[k].center = metric.snap_to_fundamental_domain(out[k].center);
    }
  }
  return out;
}

namespace {

// Damped Newton on grad Sc with a spectral pseudo-inverse, so ridge maxima
// (singular Hessian) still settle onto the ridge.
Eigen::Vector2d refine_curvature_maximum(const ManifoldModel& model, Eigen::Vector2d p,
                                         double max_step) {
  for (int it = 0; it < 30; ++it) {
    const Eigen::Vector2d g = scalar_curvature_gradient(model, p);
    const Eigen::Matrix2d h = scalar_curvature_hessian(model, p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const double scale = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1)));
    if (scale == 0.0) break;
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    for (int i = 0; i < 2; ++i) {
      const double lam = es.eigenvalues()(i);
      if (std::abs(lam) > 1e-10 * scale) {
        step -= es.eigenvectors().col(i) * (es.eigenvectors().col(i).dot(g) / lam);
      }
    }
    if (step.norm() > max_step) step *= max_step / step.norm();
    p += step;
    if (step.norm() <= 1e-14 * (1.0 + p.norm())) break;
  }
  return p;
}

double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double lx, double ly) {
  double dx = std::abs(a.x() - b.x());
  double dy = std::abs(a.y() - b.y());
  dx = std::min(dx, lx - dx);
  dy = std::min(dy, ly - dy);
  return std::hypot(dx, dy);
}

}  // namespace

CriticalTrackResult critical_point_track(const ConformalMetric& metric,
                                         const std::vector<double>& rhos,
                                         const TrackOptions& opts) {
  if (rhos.empty()) throw ValidationError("critical_point_track needs rho values");
  for (size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0)) throw ValidationError("critical_point_track needs rho > 0");
    if (i > 0 && !(rhos[i] > rhos[i - 1])) {
      throw ValidationError("critical_point_track needs strictly increasing rho");
    }
  }
  const ManifoldModel& model = metric.model();

  CriticalTrackResult result;
  result.rho = rhos;

  // Scan the scalar curvature for strict-or-ridge local maxima.
  const int G = opts.scan_grid;
  std::vector<std::vector<double>> sc(G, std::vector<double>(G));
  double sc_min = std::numeric_limits<double>::infinity(), sc_max = -sc_min;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      sc[i][j] = scalar_curvature(model, {metric.lx() * i / G, metric.ly() * j / G});
      sc_min = std::min(sc_min, sc[i][j]);
      sc_max = std::max(sc_max, sc[i][j]);
    }
  }
  if (sc_max - sc_min <= 1e-12 * (1.0 + std::abs(sc_max))) {
    result.diagnostic =
        "scalar curvature is constant: every point is a degenerate critical point, nothing to "
        "track";
    return result;
  }

  std::vector<Eigen::Vector2d> hits;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      bool ge_all = true, gt_one = false;
      for (int di = -1; di <= 1 && ge_all; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double nb = sc[(i + di + G) % G][(j + dj + G) % G];
          if (sc[i][j] < nb) {
            ge_all = false;
            break;
          }
          if (sc[i][j] > nb) gt_one = true;
        }
      }
      if (ge_all && gt_one) {
        hits.emplace_back(metric.lx() * i / G, metric.ly() * j / G);
      }
    }
  }

  const double spacing = std::max(metric.lx(), metric.ly()) / G;
  for (Eigen::Vector2d& p : hits) {
    p = metric.snap_to_fundamental_domain(
        refine_curvature_maximum(model, p, 2.0 * spacing));
  }
  // Cluster refined hits (a ridge collapses to one representative).
  std::vector<Eigen::Vector2d> reps;
  for (const Eigen::Vector2d& p : hits) {
    bool merged = false;
    for (Eigen::Vector2d& r : reps) {
      if (torus_distance(p, r, metric.lx(), metric.ly()) < 2.5 * spacing) {
        if (scalar_curvature(model, p) > scalar_curvature(model, r)) r = p;
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(p);
  }

  std::ostringstream diag;
  for (const Eigen::Vector2d& p : reps) {
    CriticalPoint cp;
    cp.location = p;
    cp.sc = scalar_curvature(model, p);
    cp.hessian = scalar_curvature_hessian(model, p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cp.hessian);
    const double scale = std::max({std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1)),
                                   (sc_max - sc_min) / (metric.min_side() * metric.min_side())});
    cp.nondegenerate = es.eigenvalues()(1) < -1e-8 * scale;  // negative definite
    if (!cp.nondegenerate) {
      diag << "degenerate curvature maximum at (" << p.x() << ", " << p.y()
           << "): Hessian eigenvalues " << es.eigenvalues()(0) << ", " << es.eigenvalues()(1)
           << "; not tracked\n";
    }
    result.maxima.push_back(cp);
  }
  result.diagnostic = diag.str();

  const double delta = opts.gradient_step_frac * metric.min_side();
  for (const CriticalPoint& cp : result.maxima) {
    if (!cp.nondegenerate) continue;
    CriticalPath path;
    path.seed = cp;
    Eigen::Vector2d p = cp.location;
    for (double rho : rhos) {
      const double volume = rho * rho;
      const auto fval = [&](const Eigen::Vector2d& q) {
        return profile_objective(metric, q, volume, opts.solve);
      };
      const auto grad = [&](const Eigen::Vector2d& q) {
        return Eigen::Vector2d(
            (fval({q.x() + delta, q.y()}) - fval({q.x() - delta, q.y()})) / (2.0 * delta),
            (fval({q.x(), q.y() + delta}) - fval({q.x(), q.y() - delta})) / (2.0 * delta));
      };

      const double gtol = std::max(1e-8, 3e-6 * rho * rho * rho);
      const double step_cap = 0.05 * metric.min_side();
      double f = fval(p);
      Eigen::Vector2d g = grad(p);
      bool converged = g.norm() <= gtol;
      Eigen::Vector2d prev_p = p, prev_g = g;
      double alpha = (g.norm() > 0.0) ? std::min(0.01 * metric.min_side() / g.norm(),
                                                 1.0 / std::max(1e-12, g.norm()))
                                      : 0.0;
      for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        Eigen::Vector2d step = -alpha * g;
        if (step.norm() > step_cap) step *= step_cap / step.norm();
        Eigen::Vector2d cand = p + step;
        double fc = fval(cand);
        int halvings = 0;
        while (fc > f && halvings < 8) {
          step *= 0.5;
          cand = p + step;
          fc = fval(cand);
          ++halvings;
        }
        prev_p = p;
        prev_g = g;
        p = cand;
        f = fc;
        g = grad(p);
        if (g.norm() <= gtol) {
          converged = true;
          break;
        }
        const Eigen::Vector2d s = p - prev_p;
        const Eigen::Vector2d y = g - prev_g;
        const double sy = s.dot(y);
        alpha = (sy > 0.0) ? s.dot(s) / sy : 2.0 * alpha;  // Barzilai-Borwein step
      }
      path.points.push_back({rho, p, f, converged});
    }
    result.paths.push_back(std::move(path));
  }

  if (!result.paths.empty()) {
    result.profile_estimate.resize(rhos.size());
    for (size_t k = 0; k < rhos.size(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (const CriticalPath& path : result.paths) best = std::min(best, path.points[k].f);
      result.profile_estimate[k] = best;
    }
  }
  return result;
}

}  // namespace isoprof
