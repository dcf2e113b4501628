#include "isoprof/families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "isoprof/interp.hpp"

namespace isoprof {

namespace {

constexpr double kPi = 3.14159265358979323846;

ProfileCurve closed_form(std::string id, double t_min, double t_max,
                         std::function<std::pair<double, double>(double)> eval,
                         std::function<double(double)> invert) {
  ProfileCurve c;
  c.family_id = std::move(id);
  c.t_min = t_min;
  c.t_max = t_max;
  c.provenance = Provenance::ClosedForm;
  c.monotone_v = true;
  c.eval = std::move(eval);
  c.invert_v = std::move(invert);
  return c;
}

std::vector<ProfileCurve> flat_torus_families(const ManifoldModel& model) {
  const std::vector<double>& sides = model.sides();
  const int n = model.dimension();
  const double total = model.total_volume();
  std::vector<ProfileCurve> out;

  if (n == 2) {
    const double l1 = sides[0];
    const double l2 = sides[1];
    out.push_back(closed_form(
        "disk", 0.0, 0.5 * l1,
        [](double r) { return std::pair<double, double>(kPi * r * r, 2.0 * kPi * r); },
        [](double v) { return std::sqrt(v / kPi); }));
    // band-x: boundary geodesics parallel to the x axis (length l1), width in y.
    out.push_back(closed_form(
        "band-x", 0.0, l2,
        [l1](double t) { return std::pair<double, double>(t * l1, 2.0 * l1); },
        [l1](double v) { return v / l1; }));
    out.push_back(closed_form(
        "band-y", 0.0, l1,
        [l2](double t) { return std::pair<double, double>(t * l2, 2.0 * l2); },
        [l2](double v) { return v / l2; }));
  } else {
    // Ball x subtorus families over every nonempty coordinate subset S:
    // v = omega_k r^k prod_{i not in S} L_i, w = k omega_k r^{k-1} (same product).
    for (int mask = 1; mask < (1 << n); ++mask) {
      const int k = __builtin_popcount(mask);
      double trans = 1.0;
      double r_cap = 0.0;
      bool first = true;
      std::ostringstream idx;
      for (int i = 0; i < n; ++i) {
        if (mask & (1 << i)) {
          r_cap = first ? sides[i] : std::min(r_cap, sides[i]);
          first = false;
          idx << i;
        } else {
          trans *= sides[i];
        }
      }
      r_cap *= 0.5;
      const double wk = unit_ball_volume(k);
      std::string id;
      if (k == n) {
        id = "ball";
      } else if (k == 1) {
        id = "slab-" + idx.str();
      } else {
        id = "cyl-" + idx.str();
      }
      out.push_back(closed_form(
          id, 0.0, r_cap,
          [k, wk, trans](double r) {
            return std::pair<double, double>(wk * std::pow(r, k) * trans,
                                             k * wk * std::pow(r, k - 1) * trans);
          },
          [k, wk, trans](double v) { return std::pow(v / (wk * trans), 1.0 / k); }));
    }
  }

  const size_t base = out.size();
  for (size_t i = 0; i < base; ++i) out.push_back(complement_curve(out[i], total));
  return out;
}

std::vector<ProfileCurve> sphere_families(const ManifoldModel& model) {
  const double R = model.radius();
  std::vector<ProfileCurve> out;
  // Geodesic caps sweep the full volume range; the complement of a cap is a cap.
  out.push_back(closed_form(
      "cap", 0.0, kPi * R,
      [R](double r) {
        return std::pair<double, double>(2.0 * kPi * R * R * (1.0 - std::cos(r / R)),
                                         2.0 * kPi * R * std::sin(r / R));
      },
      [R](double v) {
        const double c = std::clamp(1.0 - v / (2.0 * kPi * R * R), -1.0, 1.0);
        return R * std::acos(c);
      }));
  return out;
}

// Tabulated pseudo-ball family at one center: geometric radius sweep with
// warm starts, shape-preserving interpolation in log r.
ProfileCurve pseudo_ball_curve_at_center(const ConformalMetric& metric,
                                         const Eigen::Vector2d& center,
                                         const FamilyOptions& opts) {
  const double side = metric.min_side();
  const double r_lo = opts.r_lo_frac * side;
  const double r_hi = opts.r_hi_frac * side;
  if (!(r_lo < r_hi)) throw ValidationError("pseudo-ball family radius range is empty");
  const int nr = std::max(opts.radii, 8);

  std::vector<double> logr, vv, wwv;
  logr.reserve(nr);
  PseudoBall prev;
  bool have_prev = false;
  for (int i = 0; i < nr; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (nr - 1));
    PseudoBall ball =
        solve_pseudo_ball(metric, center, r, opts.solve, have_prev ? &prev : nullptr);
    // Keep the table strictly monotone in v so the curve stays invertible.
    if (!vv.empty() && !(ball.v > vv.back())) break;
    logr.push_back(std::log(r));
    vv.push_back(ball.v);
    wwv.push_back(ball.w);
    prev = std::move(ball);
    have_prev = true;
  }
  if (logr.size() < 4) throw SolverError("pseudo-ball family table too short");

  auto v_of = std::make_shared<MonotoneCubic>(logr, vv);
  auto w_of = std::make_shared<MonotoneCubic>(std::move(logr), std::move(wwv));

  std::ostringstream id;
  id.precision(9);
  id << "pseudo-ball@" << center.x() << "," << center.y();

  ProfileCurve c;
  c.family_id = id.str();
  c.t_min = std::exp(v_of->x_min());
  c.t_max = std::exp(v_of->x_max());
  c.provenance = Provenance::Numeric;
  c.monotone_v = true;
  c.eval = [v_of, w_of](double t) {
    const double s = std::log(t);
    return std::pair<double, double>((*v_of)(s), (*w_of)(s));
  };
  return c;
}

std::vector<ProfileCurve> conformal_families(const ManifoldModel& model,
                                             const FamilyOptions& opts) {
  const ConformalMetric metric(model);
  const double lx = metric.lx();
  const double ly = metric.ly();
  const double total = metric.total_volume();
  std::vector<ProfileCurve> out;

  for (int i = 0; i < opts.centers_x; ++i) {
    for (int j = 0; j < opts.centers_y; ++j) {
      const Eigen::Vector2d center(lx * i / opts.centers_x, ly * j / opts.centers_y);
      out.push_back(pseudo_ball_curve_at_center(metric, center, opts));
    }
  }

  // Flat bands survive only when phi does not depend on the transverse
  // coordinate; their length/area constants are quadrature values.
  for (int axis = 0; axis < 2; ++axis) {
    if (!conformal_band_exists(model, axis)) continue;
    const int nq = std::max(opts.band_quadrature, 64);
    const double len = (axis == 0) ? lx : ly;
    const double width_cap = (axis == 0) ? ly : lx;
    double c1 = 0.0, c2 = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double s = len * q / nq;
      const Eigen::Vector2d p = (axis == 0) ? Eigen::Vector2d(s, 0.0) : Eigen::Vector2d(0.0, s);
      const double e = std::exp(metric.phi(p));
      c1 += e;
      c2 += e * e;
    }
    c1 *= len / nq;
    c2 *= len / nq;
    ProfileCurve band;
    band.family_id = (axis == 0) ? "band-x" : "band-y";
    band.t_min = 0.0;
    band.t_max = width_cap;
    band.provenance = Provenance::Numeric;
    band.monotone_v = true;
    band.eval = [c1, c2](double t) { return std::pair<double, double>(t * c2, 2.0 * c1); };
    band.invert_v = [c2](double v) { return v / c2; };
    out.push_back(band);
  }

  const size_t base = out.size();
  for (size_t i = 0; i < base; ++i) out.push_back(complement_curve(out[i], total));
  return out;
}

}  // namespace

bool conformal_band_exists(const ManifoldModel& model, int axis) {
  if (model.kind() != ModelKind::ConformalTorus) {
    throw ValidationError("conformal_band_exists requires a conformal torus model");
  }
  if (axis != 0 && axis != 1) throw ValidationError("band axis must be 0 or 1");
  for (const PhiMode& m : model.phi().modes()) {
    const int transverse = (axis == 0) ? m.ky : m.kx;
    if (transverse != 0 && (m.cos_coef != 0.0 || m.sin_coef != 0.0)) return false;
  }
  return true;
}

std::vector<ProfileCurve> enumerate_families(const ManifoldModel& model,
                                             const FamilyOptions& opts) {
  std::vector<ProfileCurve> out;
  switch (model.kind()) {
    case ModelKind::FlatTorus:
      out = flat_torus_families(model);
      break;
    case ModelKind::RoundSphere:
      out = sphere_families(model);
      break;
    case ModelKind::ConformalTorus:
      out = conformal_families(model, opts);
      break;
  }
  // Interior sanity: 0 < v < vol(M), w > 0 on the open parameter domain.
  const double total = model.total_volume();
  for (const ProfileCurve& c : out) {
    for (int k = 1; k < 32; ++k) {
      const double t = c.t_min + (c.t_max - c.t_min) * k / 32.0;
      const auto [v, w] = c.eval(t);
      if (!(v > 0.0) || !(v < total * (1.0 + 1e-12)) || !(w > 0.0)) {
        throw SolverError("family " + c.family_id + " leaves the admissible (v, w) range");
      }
    }
  }
  return out;
}

ProfileCurve complement_curve(const ProfileCurve& curve, double total_volume) {
  if (!(total_volume > 0.0)) throw ValidationError("complement needs a positive total volume");
  ProfileCurve c;
  c.family_id = curve.family_id + "~complement";
  c.t_min = curve.t_min;
  c.t_max = curve.t_max;
  c.provenance = curve.provenance;
  c.monotone_v = false;  // v decreasing when the base family is increasing
  const auto inner = curve.eval;
  c.eval = [inner, total_volume](double t) {
    auto [v, w] = inner(t);
    return std::pair<double, double>(total_volume - v, w);
  };
  if (curve.invert_v) {
    const auto inner_inv = curve.invert_v;
    c.invert_v = [inner_inv, total_volume](double v) { return inner_inv(total_volume - v); };
  }
  return c;
}

}  // namespace isoprof
