#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "isoprof/families.hpp"
#include "oracles.hpp"

using namespace isoprof;

namespace {

constexpr double kPi = 3.14159265358979323846;

const ProfileCurve& find_family(const std::vector<ProfileCurve>& curves, const std::string& id) {
  for (const ProfileCurve& c : curves) {
    if (c.family_id == id) return c;
  }
  REQUIRE_MESSAGE(false, "family not found: " << id);
  static ProfileCurve dummy;
  return dummy;
}

std::set<std::string> family_ids(const std::vector<ProfileCurve>& curves) {
  std::set<std::string> ids;
  for (const ProfileCurve& c : curves) ids.insert(c.family_id);
  return ids;
}

}  // namespace

TEST_CASE("flat 2-torus families: inventory, disk and band identities") {
  auto m = ManifoldModel::flat_torus({2 * kPi, 2 * kPi});
  auto curves = enumerate_families(m);
  CHECK(curves.size() == 6);
  CHECK(family_ids(curves) ==
        std::set<std::string>{"disk", "band-x", "band-y", "disk~complement",
                              "band-x~complement", "band-y~complement"});

  const ProfileCurve& disk = find_family(curves, "disk");
  CHECK(disk.t_max == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(disk.provenance == Provenance::ClosedForm);
  for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const auto [v, w] = disk(r);
    CHECK(v == doctest::Approx(kPi * r * r).epsilon(1e-14));
    // The isoperimetric identity for round disks: w = 2 sqrt(pi v).
    CHECK(w == doctest::Approx(2.0 * std::sqrt(kPi * v)).epsilon(1e-12));
    CHECK(disk.invert_v(v) == doctest::Approx(r).epsilon(1e-13));
  }

  const ProfileCurve& band = find_family(curves, "band-x");
  for (double t : {0.3, 1.0, 4.0}) {
    const auto [v, w] = band(t);
    CHECK(v == doctest::Approx(t * 2 * kPi).epsilon(1e-14));
    CHECK(w == doctest::Approx(4 * kPi).epsilon(1e-15));
  }

  // Complement pairs volume v with total - v at the same boundary length.
  const ProfileCurve& comp = find_family(curves, "disk~complement");
  const double total = m.total_volume();
  for (double r : {0.4, 1.3, 2.8}) {
    const auto [v, w] = disk(r);
    const auto [vc, wc] = comp(r);
    CHECK(vc == doctest::Approx(total - v).epsilon(1e-14));
    CHECK(wc == w);
    CHECK(comp.invert_v(vc) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK(!comp.monotone_v);
}

TEST_CASE("rectangular torus bands carry their boundary lengths") {
  auto m = ManifoldModel::flat_torus({3.0, 5.0});
  auto curves = enumerate_families(m);
  // band-x boundaries are parallel to the x axis: two circles of length 3.
  const ProfileCurve& bx = find_family(curves, "band-x");
  CHECK(bx.t_max == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(bx(1.0).second == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(bx(1.0).first == doctest::Approx(3.0).epsilon(1e-15));
  const ProfileCurve& by = find_family(curves, "band-y");
  CHECK(by.t_max == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(by(1.0).second == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("sphere caps satisfy the cap identity and match quadrature") {
  const double R = 1.3;
  auto m = ManifoldModel::sphere(R);
  auto curves = enumerate_families(m);
  REQUIRE(curves.size() == 1);  // a cap's complement is again a cap
  const ProfileCurve& cap = curves[0];
  CHECK(cap.family_id == "cap");
  CHECK(cap.t_max == doctest::Approx(kPi * R).epsilon(1e-15));

  for (double t : {0.2, 0.7, 1.5, 2.5, 3.5}) {
    const auto [v, w] = cap(t);
    // w^2 = 4 pi v - v^2 / R^2 for geodesic caps.
    CHECK(w * w == doctest::Approx(4 * kPi * v - v * v / (R * R)).epsilon(1e-10));
    CHECK(cap.invert_v(v) == doctest::Approx(t).epsilon(1e-12));
    // Independent surface quadrature of the cap area and rim length.
    const auto [vq, wq] = oracles::sphere_cap_quadrature(R, t);
    CHECK(v == doctest::Approx(vq).epsilon(1e-10));
    CHECK(w == doctest::Approx(wq).epsilon(1e-9));
  }

  // Hemisphere of the unit sphere: area 2 pi, equator length 2 pi.
  auto unit = enumerate_families(ManifoldModel::sphere(1.0))[0];
  const auto [vh, wh] = unit(kPi / 2);
  CHECK(vh == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(wh == doctest::Approx(2 * kPi).epsilon(1e-14));

  // Cap symmetry: the complement cap at t' = pi R - t has volume total - v
  // and the same rim.
  const double total = m.total_volume();
  for (double t : {0.5, 1.1, 2.0}) {
    const auto [v, w] = cap(t);
    const auto [vc, wc] = cap(kPi * R - t);
    CHECK(vc == doctest::Approx(total - v).epsilon(1e-12));
    CHECK(wc == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("complement is an involution on curve values") {
  auto m = ManifoldModel::flat_torus({2.0, 3.0});
  auto curves = enumerate_families(m);
  const ProfileCurve& disk = find_family(curves, "disk");
  ProfileCurve twice = complement_curve(complement_curve(disk, m.total_volume()),
                                        m.total_volume());
  for (double t : {0.2, 0.6, 0.9}) {
    CHECK(twice(t).first == doctest::Approx(disk(t).first).epsilon(1e-15));
    CHECK(twice(t).second == disk(t).second);
  }
  CHECK_THROWS_AS(complement_curve(disk, 0.0), ValidationError);
}

TEST_CASE("flat 3-torus families: ball, slabs, cylinders with closed forms") {
  const std::vector<double> sides{1.0, 1.3, 2.1};
  auto m = ManifoldModel::flat_torus(sides);
  auto curves = enumerate_families(m);
  CHECK(curves.size() == 14);  // 7 coordinate subsets, each with a complement
  auto ids = family_ids(curves);
  for (const char* id : {"ball", "slab-0", "slab-1", "slab-2", "cyl-01", "cyl-02", "cyl-12"}) {
    CHECK(ids.count(id) == 1);
    CHECK(ids.count(std::string(id) + "~complement") == 1);
  }

  const double r = 0.37;
  const auto [vb, wb] = find_family(curves, "ball")(r);
  CHECK(vb == doctest::Approx(4.0 / 3.0 * kPi * r * r * r).epsilon(1e-14));
  CHECK(wb == doctest::Approx(4.0 * kPi * r * r).epsilon(1e-14));
  CHECK(find_family(curves, "ball").t_max == doctest::Approx(0.5).epsilon(1e-15));

  // slab-2 thickens around the third coordinate: transverse area 1 * 1.3.
  const auto [vs, ws] = find_family(curves, "slab-2")(r);
  CHECK(vs == doctest::Approx(2.0 * r * 1.0 * 1.3).epsilon(1e-14));
  CHECK(ws == doctest::Approx(2.0 * 1.0 * 1.3).epsilon(1e-14));
  CHECK(find_family(curves, "slab-2").t_max == doctest::Approx(2.1 / 2).epsilon(1e-15));

  // cyl-02 is a solid tube over coordinates {0, 2}, translated along side 1.3.
  const auto [vc, wc] = find_family(curves, "cyl-02")(r);
  CHECK(vc == doctest::Approx(kPi * r * r * 1.3).epsilon(1e-14));
  CHECK(wc == doctest::Approx(2 * kPi * r * 1.3).epsilon(1e-14));
  CHECK(find_family(curves, "cyl-02").t_max == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("family values scale covariantly with the metric") {
  const double lam = 1.7;
  SUBCASE("dimension 2") {
    auto base = enumerate_families(ManifoldModel::flat_torus({2.0, 3.0}));
    auto scaled = enumerate_families(ManifoldModel::flat_torus({lam * 2.0, lam * 3.0}));
    REQUIRE(family_ids(base) == family_ids(scaled));
    for (const ProfileCurve& c : base) {
      const ProfileCurve& s = find_family(scaled, c.family_id);
      for (double frac : {0.25, 0.5, 0.75}) {
        const double t = c.t_min + frac * (c.t_max - c.t_min);
        const auto [v, w] = c(t);
        const auto [vs, ws] = s(lam * t);
        CHECK(vs == doctest::Approx(lam * lam * v).epsilon(1e-13));
        CHECK(ws == doctest::Approx(lam * w).epsilon(1e-13));
      }
    }
  }
  SUBCASE("dimension 3") {
    auto base = enumerate_families(ManifoldModel::flat_torus({1.0, 1.3, 2.1}));
    auto scaled =
        enumerate_families(ManifoldModel::flat_torus({lam * 1.0, lam * 1.3, lam * 2.1}));
    for (const ProfileCurve& c : base) {
      const ProfileCurve& s = find_family(scaled, c.family_id);
      const double t = c.t_min + 0.4 * (c.t_max - c.t_min);
      const auto [v, w] = c(t);
      const auto [vs, ws] = s(lam * t);
      CHECK(vs == doctest::Approx(lam * lam * lam * v).epsilon(1e-13));
      CHECK(ws == doctest::Approx(lam * lam * w).epsilon(1e-13));
    }
  }
}

TEST_CASE("conformal band existence depends on the transverse coordinate") {
  auto cosx = ManifoldModel::conformal_torus(2 * kPi, 2 * kPi, {{1, 0, 0.1, 0.0}});
  CHECK(conformal_band_exists(cosx, 0));   // phi constant in y
  CHECK(!conformal_band_exists(cosx, 1));  // phi varies in x

  auto cosy = ManifoldModel::conformal_torus(2 * kPi, 2 * kPi, {{0, 1, 0.1, 0.0}});
  CHECK(!conformal_band_exists(cosy, 0));
  CHECK(conformal_band_exists(cosy, 1));

  auto both = ManifoldModel::conformal_torus(2 * kPi, 2 * kPi, {{1, 1, 0.1, 0.0}});
  CHECK(!conformal_band_exists(both, 0));
  CHECK(!conformal_band_exists(both, 1));

  CHECK_THROWS_AS(conformal_band_exists(ManifoldModel::sphere(1.0), 0), ValidationError);
  CHECK_THROWS_AS(conformal_band_exists(cosx, 2), ValidationError);
}

TEST_CASE("conformal families: pseudo-ball tables and the surviving band") {
  auto model = ManifoldModel::conformal_torus(2 * kPi, 2 * kPi, {{1, 0, 0.1, 0.0}});
  FamilyOptions opts;
  opts.centers_x = 2;
  opts.centers_y = 2;
  opts.radii = 12;
  opts.solve.modes = 24;
  opts.solve.collocation = 96;
  auto curves = enumerate_families(model, opts);

  // 4 pseudo-ball centers plus band-x, each with a complement.
  CHECK(curves.size() == 10);
  auto ids = family_ids(curves);
  CHECK(ids.count("pseudo-ball@0,0") == 1);
  CHECK(ids.count("band-x") == 1);
  CHECK(ids.count("band-y") == 0);
  CHECK(ids.count("band-x~complement") == 1);

  // Band constants are the Bessel integrals of e^{phi} and e^{2 phi}.
  const ProfileCurve& band = find_family(curves, "band-x");
  const double c1 = 2 * kPi * std::cyl_bessel_i(0.0, 0.1);
  const double c2 = 2 * kPi * std::cyl_bessel_i(0.0, 0.2);
  CHECK(band(1.0).second == doctest::Approx(2 * c1).epsilon(1e-12));
  CHECK(band(1.0).first == doctest::Approx(c2).epsilon(1e-12));
  CHECK(band.invert_v(c2) == doctest::Approx(1.0).epsilon(1e-13));

  // Pseudo-ball tables: numeric provenance, v strictly increasing in t = r.
  const ProfileCurve& pb = find_family(curves, "pseudo-ball@0,0");
  CHECK(pb.provenance == Provenance::Numeric);
  CHECK(pb.monotone_v);
  double prev_v = 0.0;
  for (int k = 1; k <= 16; ++k) {
    const double t = pb.t_min + (pb.t_max - pb.t_min) * k / 17.0;
    const auto [v, w] = pb(t);
    CHECK(v > prev_v);
    CHECK(w > 0.0);
    // All pseudo-balls beat no curve trivially here; just confirm the table
    // stays close to the directly solved measure at its own radius.
    prev_v = v;
  }
  // Table interpolation reproduces a direct solve away from the knots once
  // the knot spacing is fine enough; a 48-knot table leaves only the
  // interpolant truncation error.
  FamilyOptions dense = opts;
  dense.centers_x = 1;
  dense.centers_y = 1;
  dense.radii = 48;
  auto dense_curves = enumerate_families(model, dense);
  const ProfileCurve& pbd = find_family(dense_curves, "pseudo-ball@0,0");
  ConformalMetric metric(model);
  const double t_mid = std::sqrt(pbd.t_min * pbd.t_max) * 1.07;
  const auto [vt, wt] = pbd(t_mid);
  const auto [vd, wd] = omega_map(metric, Eigen::Vector2d(0, 0), t_mid, dense.solve);
  CHECK(vt == doctest::Approx(vd).epsilon(5e-5));
  CHECK(wt == doctest::Approx(wd).epsilon(5e-5));
}
