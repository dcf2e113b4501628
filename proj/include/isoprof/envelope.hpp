#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isoprof/families.hpp"

namespace isoprof {

struct EnvelopeSegment {
  double v_start = 0.0;
  double v_end = 0.0;
  std::string family;
};

struct EnvelopeBreakpoint {
  double v = 0.0;
  double tol = 0.0;  // refinement tolerance that produced this location
};

struct EnvelopeOptions {
  int grid = 2048;
  double refine_tol_closed = 1e-9;   // both neighbours closed-form
  double refine_tol_numeric = 1e-6;  // any neighbour numeric
};

/// Lower contour of a set of (v, w) curves over a volume window: per-volume
/// minimum of boundary volume, with segment attribution and refined
/// breakpoints.  Ties go to the lexicographically smallest family id, and a
/// breakpoint belongs to the segment on its left.
class EnvelopeResult {
 public:
  struct Piece;  // monotone-in-v portion of one curve, defined internally

  const std::vector<double>& v_grid() const { return v_grid_; }
  const std::vector<EnvelopeSegment>& segments() const { return segments_; }
  const std::vector<EnvelopeBreakpoint>& breakpoints() const { return breakpoints_; }
  double v_lo() const { return v_grid_.front(); }
  double v_hi() const { return v_grid_.back(); }

  /// (envelope value, owning family id) at volume v in [v_lo, v_hi].
  std::pair<double, std::string> eval(double v) const;

 private:
  friend EnvelopeResult lower_contour(const std::vector<ProfileCurve>&, double, double,
                                      const EnvelopeOptions&);

  std::shared_ptr<const std::vector<Piece>> pieces_;
  std::vector<double> v_grid_;
  std::vector<EnvelopeSegment> segments_;
  std::vector<EnvelopeBreakpoint> breakpoints_;
  std::vector<int> segment_piece_;  // piece chosen for each segment
};

EnvelopeResult lower_contour(const std::vector<ProfileCurve>& curves, double v_lo, double v_hi,
                             const EnvelopeOptions& opts = {});

inline std::pair<double, std::string> envelope_eval(const EnvelopeResult& envelope, double v) {
  return envelope.eval(v);
}

/// Bisect the crossing of two curves' w(v) graphs inside [v_lo, v_hi] to the
/// given width.  Requires both curves to cover the bracket with a sign change
/// of w_a - w_b across it.
double refine_breakpoint(const ProfileCurve& a, const ProfileCurve& b, double v_lo, double v_hi,
                         double tol);

}  // namespace isoprof
