#include "isoprof/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isoprof {

struct EnvelopeResult::Piece {
  ProfileCurve curve;
  double t_lo = 0.0, t_hi = 0.0;   // parameter bounds of the monotone piece
  double v_min = 0.0, v_max = 0.0; // sorted volume range
  bool increasing = true;

  bool covers(double v, double slack) const { return v >= v_min - slack && v <= v_max + slack; }

  double t_at(double v) const {
    if (curve.invert_v) {
      return std::clamp(curve.invert_v(v), std::min(t_lo, t_hi), std::max(t_lo, t_hi));
    }
    // Bisection on the monotone piece.
    double lo = t_lo, hi = t_hi;
    double flo = curve.eval(lo).first - v;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fm = curve.eval(mid).first - v;
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      if (std::abs(hi - lo) <= 1e-15 * (1.0 + std::abs(lo))) break;
    }
    return 0.5 * (lo + hi);
  }

  double w_at(double v) const { return curve.eval(t_at(v)).second; }
};

namespace {

using Piece = EnvelopeResult::Piece;

// Cut a curve into monotone-in-v pieces: sample, locate interior extrema by
// sign changes of differences, refine each by bisection on the local slope
// sign.
std::vector<Piece> split_curve(const ProfileCurve& curve) {
  const int S = 1024;
  const double span = curve.t_max - curve.t_min;
  if (!(span > 0.0)) throw ValidationError("profile curve has an empty parameter domain");

  std::vector<double> ts(S + 1), vs(S + 1);
  for (int i = 0; i <= S; ++i) {
    ts[i] = curve.t_min + span * i / S;
    vs[i] = curve.eval(ts[i]).first;
  }

  std::vector<double> cuts;
  const double dstep = span * 1e-9;
  const auto slope_sign = [&](double t) {
    const double a = curve.eval(std::max(curve.t_min, t - dstep)).first;
    const double b = curve.eval(std::min(curve.t_max, t + dstep)).first;
    return b >= a;
  };
  for (int i = 1; i + 1 <= S; ++i) {
    const bool up_prev = vs[i] >= vs[i - 1];
    const bool up_next = vs[i + 1] >= vs[i];
    if (up_prev == up_next) continue;
    double lo = ts[i - 1], hi = ts[i + 1];
    const bool lo_sign = slope_sign(lo);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope_sign(mid) == lo_sign) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    cuts.push_back(0.5 * (lo + hi));
  }

  std::vector<Piece> pieces;
  double t0 = curve.t_min;
  cuts.push_back(curve.t_max);
  for (double t1 : cuts) {
    if (!(t1 > t0)) continue;
    Piece p;
    p.curve = curve;
    p.t_lo = t0;
    p.t_hi = t1;
    const double va = curve.eval(t0).first;
    const double vb = curve.eval(t1).first;
    p.increasing = vb >= va;
    p.v_min = std::min(va, vb);
    p.v_max = std::max(va, vb);
    if (!p.increasing) {
      std::swap(p.t_lo, p.t_hi);  // orient so v increases from t_lo to t_hi
    }
    pieces.push_back(std::move(p));
    t0 = t1;
  }
  return pieces;
}

struct GridChoice {
  int piece = -1;
  double w = std::numeric_limits<double>::infinity();
};

GridChoice argmin_at(const std::vector<Piece>& pieces, double v, double slack) {
  GridChoice best;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (!pieces[i].covers(v, slack)) continue;
    const double w = pieces[i].w_at(std::clamp(v, pieces[i].v_min, pieces[i].v_max));
    const double tie = 1e-12 * std::max(1.0, std::abs(best.w));
    if (best.piece < 0 || w < best.w - tie) {
      best.piece = static_cast<int>(i);
      best.w = w;
    } else if (w <= best.w + tie &&
               pieces[i].curve.family_id < pieces[best.piece].curve.family_id) {
      best.piece = static_cast<int>(i);
      best.w = std::min(best.w, w);
    }
  }
  return best;
}

}  // namespace

EnvelopeResult lower_contour(const std::vector<ProfileCurve>& curves, double v_lo, double v_hi,
                             const EnvelopeOptions& opts) {
  if (curves.empty()) throw ValidationError("lower_contour needs at least one curve");
  if (!(v_hi > v_lo)) throw ValidationError("lower_contour needs v_hi > v_lo");
  if (opts.grid < 16) throw ValidationError("lower_contour grid must be at least 16");

  auto pieces = std::make_shared<std::vector<Piece>>();
  for (const ProfileCurve& c : curves) {
    for (Piece& p : split_curve(c)) pieces->push_back(std::move(p));
  }
  // Deterministic scan order regardless of caller ordering.
  std::stable_sort(pieces->begin(), pieces->end(), [](const Piece& a, const Piece& b) {
    if (a.curve.family_id != b.curve.family_id) return a.curve.family_id < b.curve.family_id;
    return a.v_min < b.v_min;
  });

  const double slack = 1e-12 * std::max(1.0, std::abs(v_hi));
  const int G = opts.grid;

  EnvelopeResult result;
  result.pieces_ = pieces;
  result.v_grid_.resize(G);
  std::vector<GridChoice> choice(G);
  for (int i = 0; i < G; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (G - 1);
    result.v_grid_[i] = v;
    choice[i] = argmin_at(*pieces, v, slack);
    if (choice[i].piece < 0) {
      std::ostringstream os;
      os << "lower_contour: volume " << v << " is not covered by any family";
      throw SolverError(os.str());
    }
  }

  // Group by owning family; refine each change point.
  const auto family_of = [&](int idx) -> const std::string& {
    return (*pieces)[choice[idx].piece].curve.family_id;
  };
  int seg_first = 0;
  for (int i = 1; i <= G; ++i) {
    if (i < G && family_of(i) == family_of(seg_first)) continue;

    EnvelopeSegment seg;
    seg.family = family_of(seg_first);
    seg.v_start = result.segments_.empty() ? v_lo : result.segments_.back().v_end;
    result.segment_piece_.push_back(choice[seg_first].piece);

    if (i < G) {
      const Piece& pa = (*pieces)[choice[i - 1].piece];
      const Piece& pb = (*pieces)[choice[i].piece];
      const double tol = (pa.curve.provenance == Provenance::ClosedForm &&
                          pb.curve.provenance == Provenance::ClosedForm)
                             ? opts.refine_tol_closed
                             : opts.refine_tol_numeric;
      double lo = result.v_grid_[i - 1];
      double hi = result.v_grid_[i];
      const bool both_cover = pa.covers(lo, slack) && pa.covers(hi, slack) &&
                              pb.covers(lo, slack) && pb.covers(hi, slack);
      bool refined = false;
      if (both_cover) {
        const double glo = pa.w_at(lo) - pb.w_at(lo);
        const double ghi = pa.w_at(hi) - pb.w_at(hi);
        if (glo <= 0.0 && ghi >= 0.0 && (glo < 0.0 || ghi > 0.0)) {
          while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double g = pa.w_at(mid) - pb.w_at(mid);
            if (g <= 0.0) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          refined = true;
        }
      }
      if (!refined) {
        // Domain edge or non-crossing change: bisect on the argmin identity.
        const std::string fam_a = pa.curve.family_id;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          const GridChoice c = argmin_at(*pieces, mid, slack);
          if (c.piece >= 0 && (*pieces)[c.piece].curve.family_id == fam_a) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
      }
      const double bp = 0.5 * (lo + hi);
      result.breakpoints_.push_back(EnvelopeBreakpoint{bp, tol});
      seg.v_end = bp;
    } else {
      seg.v_end = v_hi;
    }
    result.segments_.push_back(std::move(seg));
    seg_first = i;
  }
  return result;
}

std::pair<double, std::string> EnvelopeResult::eval(double v) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(v_hi()));
  if (v < v_lo() - slack || v > v_hi() + slack) {
    std::ostringstream os;
    os << "envelope evaluation outside [" << v_lo() << ", " << v_hi() << "]: v = " << v;
    throw ValidationError(os.str());
  }
  v = std::clamp(v, v_lo(), v_hi());

  // A breakpoint belongs to the segment on its left.
  size_t seg = 0;
  while (seg + 1 < segments_.size() && v > segments_[seg].v_end) ++seg;

  const Piece& p = (*pieces_)[segment_piece_[seg]];
  if (p.covers(v, slack)) {
    return {p.w_at(std::clamp(v, p.v_min, p.v_max)), p.curve.family_id};
  }
  // Refined breakpoint fuzz can push v marginally outside the recorded piece;
  // fall back to the global minimum.
  const GridChoice c = argmin_at(*pieces_, v, slack);
  if (c.piece < 0) throw SolverError("envelope evaluation found no covering family");
  return {c.w, (*pieces_)[c.piece].curve.family_id};
}

double refine_breakpoint(const ProfileCurve& a, const ProfileCurve& b, double v_lo, double v_hi,
                         double tol) {
  if (!(v_hi > v_lo)) throw ValidationError("refine_breakpoint needs v_hi > v_lo");
  if (!(tol > 0.0)) throw ValidationError("refine_breakpoint needs a positive tolerance");
  const double slack = 1e-12 * std::max(1.0, std::abs(v_hi));

  const auto find_piece = [&](const ProfileCurve& c) -> Piece {
    for (Piece& p : split_curve(c)) {
      if (p.covers(v_lo, slack) && p.covers(v_hi, slack)) return p;
    }
    throw ValidationError("refine_breakpoint: curve " + c.family_id +
                          " does not cover the bracket");
  };
  const Piece pa = find_piece(a);
  const Piece pb = find_piece(b);

  double lo = v_lo, hi = v_hi;
  const double glo = pa.w_at(lo) - pb.w_at(lo);
  const double ghi = pa.w_at(hi) - pb.w_at(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    throw ValidationError("refine_breakpoint: no sign change on bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double g = pa.w_at(mid) - pb.w_at(mid);
    if (g == 0.0) return mid;
    if ((g > 0.0) == (glo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace isoprof
