#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "isoprof/cmc.hpp"
#include "isoprof/geometry.hpp"

namespace isoprof {

enum class Provenance { ClosedForm, Numeric };

/// One candidate family: a deterministic map t -> (volume, boundary volume)
/// on a closed parameter interval.
struct ProfileCurve {
  std::string family_id;
  double t_min = 0.0;
  double t_max = 1.0;
  Provenance provenance = Provenance::ClosedForm;
  bool monotone_v = true;  // v strictly increasing in t
  std::function<std::pair<double, double>(double)> eval;
  /// Optional exact parameter recovery: v -> t with v(t) = v.  Present for
  /// closed-form families; the envelope falls back to bisection otherwise.
  std::function<double(double)> invert_v;

  std::pair<double, double> operator()(double t) const { return eval(t); }
};

/// Controls for the numeric (pseudo-ball) families of a conformal torus.
struct FamilyOptions {
  int centers_x = 4;
  int centers_y = 4;
  int radii = 64;              // tabulated radii per center, geometric spacing
  double r_lo_frac = 5e-3;     // of min side
  double r_hi_frac = 0.4;      // of min side
  int band_quadrature = 4096;  // 1d nodes for band length/area integrals
  SolveOptions solve;
};

/// Candidate families of the model:
///  - flat 2-torus: disks, bands in both coordinate directions, complements;
///  - flat n-torus (n >= 3): ball x subtorus families over every nonempty
///    coordinate subset, plus complements (candidate upper bounds);
///  - round sphere: geodesic caps;
///  - conformal torus: tabulated pseudo-ball families on a center grid (and
///    their complements), plus flat bands when phi does not depend on the
///    transverse coordinate.
std::vector<ProfileCurve> enumerate_families(const ManifoldModel& model,
                                             const FamilyOptions& opts = {});

/// The complementary region family: t -> (total - v(t), w(t)).
ProfileCurve complement_curve(const ProfileCurve& curve, double total_volume);

/// True when the conformal band family in coordinate direction `axis`
/// (boundary geodesics parallel to that axis) exists, i.e. phi does not
/// depend on the transverse coordinate.
bool conformal_band_exists(const ManifoldModel& model, int axis);

}  // namespace isoprof
