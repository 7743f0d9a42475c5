#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "strategex/boundary.hpp"
#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/distance_transform.hpp"
#include "strategex/grid.hpp"
#include "strategex/response.hpp"

// Whether a candidate label pattern could be the after-gaming rule of any
// underlying classifier. Every after-gaming positive region is the original
// one grown by the movement budget, and that leaves fingerprints a candidate
// must carry: each positive lobe swallows a whole budget ball, the boundary
// never bends toward the positive side tighter than 1/alpha, convex kinks are
// rounded off, and every boundary point keeps at least one protected spot on
// its budget sphere that negatives cannot reach. The checks here are
// necessary conditions only -- a candidate passing all of them is merely "not
// refuted", since nothing reconstructs a generating classifier.

namespace strategex {

enum class ImpossibilityReason {
  None,
  SmallPositiveRegion,      // a positive lobe fits inside one budget ball
  NarrowPositiveStrip,      // a positive lobe nowhere reaches depth alpha
  LargePositiveCurvature,   // boundary bends toward positive tighter than 1/alpha
  ConvexPiecewiseLinear,    // straight edges meet in a convex kink
  SphereReachability,       // some boundary point's whole budget sphere is reachable
  NormalPointReachability,  // the protected point one budget inward is reachable
};

inline const char* reason_name(ImpossibilityReason r) {
  switch (r) {
    case ImpossibilityReason::None: return "none";
    case ImpossibilityReason::SmallPositiveRegion: return "small_positive_region";
    case ImpossibilityReason::NarrowPositiveStrip: return "narrow_positive_strip";
    case ImpossibilityReason::LargePositiveCurvature: return "large_positive_curvature";
    case ImpossibilityReason::ConvexPiecewiseLinear: return "convex_piecewise_linear";
    case ImpossibilityReason::SphereReachability: return "sphere_reachability";
    case ImpossibilityReason::NormalPointReachability: return "normal_point_reachability";
  }
  return "?";
}

struct ImpossibilityReport {
  bool impossible = false;
  ImpossibilityReason reason = ImpossibilityReason::None;
  // witness[0] sits on the candidate's boundary; later entries are supporting
  // points (e.g. the reachable inward-normal point).
  std::vector<Vec> witness;
  double value = 0.0;      // the measured quantity that crossed the line
  double threshold = 0.0;  // the line it crossed
};

// Slack, in cells, protecting the reachability tests from raster error. The
// error budget for a probe point one budget inward: up to one cell between a
// boundary cell's center and the true boundary, ~0.7 cells of cell-center
// rounding at the lookup, and up to ~2 degrees of fitted-normal error, which
// displaces the probe by another alpha*theta (about 1.3 cells at 25 cells
// per budget). Calling a point "reachable" only below alpha minus 3 cells
// keeps exactly-at-alpha configurations (halfplanes, grown lobes) on the
// possible side, while the shapes this must catch sit 5+ cells short.
constexpr double kReachabilitySlackCells = 3.0;

// Lobe-size detectors fire below alpha minus 1.5 cells: a genuine grown lobe
// contains a full budget ball whose raster measurement loses at most ~0.8
// cells, while the fixtures this flags sit 10+ cells short of alpha.
constexpr double kRegionSlackCells = 1.5;

// A tight arc only counts as curvature evidence when a probe disk around the
// point is under half positive. Genuine sub-budget arcs probe at 0.40-0.46;
// the shallow creases where two grown lobes cross probe at 0.52 and up, and
// (being concave) they are exactly what must not fire here.
constexpr double kTightArcFractionMax = 0.50;

// Minimum angle between the inward normals of two straight legs before they
// count as a kink rather than one noisy line.
constexpr double kCornerAngleMinDeg = 5.0;

namespace detail {

inline bool in_raster(const GridGeom& geom, const Vec& p) {
  for (int a = 0; a < geom.dim; ++a) {
    double t = (p[a] - geom.origin[a]) / geom.cell_size;
    if (t < 0.0 || t > static_cast<double>(geom.shape[a])) return false;
  }
  return true;
}

inline LabelGrid flip_labels(const LabelGrid& g) {
  LabelGrid f = g;
  for (auto& l : f.labels) l = l ? 0 : 1;
  return f;
}

// Positive 4-connected components, each as a sorted list of flat indices.
inline std::vector<std::vector<size_t>> positive_components(const LabelGrid& g) {
  std::vector<std::vector<size_t>> comps;
  std::vector<char> seen(g.labels.size(), 0);
  for (size_t i = 0; i < g.labels.size(); ++i) {
    if (!g.labels[i] || seen[i]) continue;
    comps.emplace_back();
    std::vector<size_t> stack{i};
    seen[i] = 1;
    while (!stack.empty()) {
      size_t c = stack.back();
      stack.pop_back();
      comps.back().push_back(c);
      auto idx = g.geom.unindex(c);
      for (int a = 0; a < g.geom.dim; ++a)
        for (int s = -1; s <= 1; s += 2) {
          auto nb = idx;
          nb[a] += s;
          if (!g.geom.in_bounds(nb)) continue;
          size_t j = g.geom.index(nb);
          if (!g.labels[j] || seen[j]) continue;
          seen[j] = 1;
          stack.push_back(j);
        }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

// Components running into the raster edge are cut off mid-shape; nothing can
// be concluded about their true size.
inline bool touches_edge(const GridGeom& geom, const std::vector<size_t>& comp) {
  for (size_t c : comp) {
    auto idx = geom.unindex(c);
    for (int a = 0; a < geom.dim; ++a)
      if (idx[a] == 0 || idx[a] == geom.shape[a] - 1) return true;
  }
  return false;
}

// First (in flat order) cell of the component with a negative axis neighbor.
inline size_t component_boundary_cell(const LabelGrid& g, const std::vector<size_t>& comp) {
  for (size_t c : comp) {
    auto idx = g.geom.unindex(c);
    for (int a = 0; a < g.geom.dim; ++a)
      for (int s = -1; s <= 1; s += 2) {
        auto nb = idx;
        nb[a] += s;
        if (g.geom.in_bounds(nb) && !g.at(nb)) return c;
      }
  }
  return comp.front();
}

// Radius of the smallest cost-norm ball covering the points. Exact for the
// box-shaped norms (axis extents, and the 45-degree rotation u=x+y, v=x-y
// turns the diamond into a box); the Euclidean case runs the classic
// move-toward-the-farthest-point iteration, within 1% after ~128 rounds.
inline double enclosing_radius(const std::vector<Vec>& pts, Norm norm) {
  if (pts.empty()) return 0.0;
  const int d = pts[0].dim;
  if (norm == Norm::LInf || (norm == Norm::L1 && d == 1)) {
    double r = 0.0;
    for (int a = 0; a < d; ++a) {
      double lo = pts[0][a], hi = lo;
      for (const Vec& p : pts) {
        lo = std::min(lo, p[a]);
        hi = std::max(hi, p[a]);
      }
      r = std::max(r, (hi - lo) / 2.0);
    }
    return r;
  }
  if (norm == Norm::L1) {
    if (d != 2) throw std::invalid_argument("enclosing_radius: l1 supports d <= 2");
    double ulo = pts[0][0] + pts[0][1], uhi = ulo;
    double vlo = pts[0][0] - pts[0][1], vhi = vlo;
    for (const Vec& p : pts) {
      double u = p[0] + p[1], v = p[0] - p[1];
      ulo = std::min(ulo, u);
      uhi = std::max(uhi, u);
      vlo = std::min(vlo, v);
      vhi = std::max(vhi, v);
    }
    return std::max(uhi - ulo, vhi - vlo) / 2.0;
  }
  Vec c = pts[0];
  for (int k = 1; k <= 128; ++k) {
    const Vec* far = &pts[0];
    double fd = 0.0;
    for (const Vec& p : pts) {
      double dd = norm_l2(p - c);
      if (dd > fd) {
        fd = dd;
        far = &p;
      }
    }
    c += (*far - c) * (1.0 / (k + 1));
  }
  double r = 0.0;
  for (const Vec& p : pts) r = std::max(r, norm_l2(p - c));
  return r;
}

// Largest measured distance-to-negatives over the sampled budget sphere
// around x. Samples leaving the raster return +infinity: nothing is known
// out there, so they can never be called reachable.
inline double sphere_max_negative_distance(const DistanceField& df_neg, const Vec& x,
                                           const CostModel& cost) {
  int n = std::max(64, static_cast<int>(std::ceil(2.0 * M_PI * cost.alpha / df_neg.geom.cell_size)));
  double worst = 0.0;
  for (const Vec& u : sphere_directions(cost, n)) {
    Vec p = x + u * cost.alpha;
    if (!in_raster(df_neg.geom, p)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, df_neg.at_point(p));
  }
  return worst;
}

// Inward normal from a model fit, or nothing when the window around x is not
// a single clean line or arc. The reachability shortcut below is only valid
// at smooth points, so "cannot tell" must stay distinct from a fallback.
inline std::optional<Vec> smooth_inward_normal(const BoundarySet& bs, const Vec& x) {
  const BoundaryPoint& anchor = nearest_boundary_point(bs, x);
  std::vector<Vec> pts = fit_points(bs, x, 12.0 * bs.geom.cell_size);
  if (pts.size() < 5) return std::nullopt;
  LineFit lf = fit_line(pts);
  if (lf.rms < kLineRmsFactor * bs.geom.cell_size) {
    Vec perp(-lf.direction[1], lf.direction[0]);
    return dot(perp, anchor.normal) >= 0.0 ? perp : perp * -1.0;
  }
  CircleFit cf = fit_circle(pts);
  if (!cf.ok || cf.radius <= 0.0 || cf.rms > kCornerCircleRmsFactor * bs.geom.cell_size)
    return std::nullopt;
  Vec radial = anchor.center - cf.center;
  if (norm_l2(radial) < 1e-12) return std::nullopt;
  Vec u = normalized(radial);
  return dot(u, anchor.normal) >= 0.0 ? u : u * -1.0;
}

}  // namespace detail

// Sweeps the positive side of the boundary ribbon and flags the candidate
// when some point's entire budget sphere lies within one budget of the
// negative region: a positive verdict at such a point would need a protected
// sphere point, and there is none.
inline ImpossibilityReport check_sphere_reachability(const LabelGrid& g, const CostModel& cost) {
  if (g.geom.dim != 2) throw std::invalid_argument("check_sphere_reachability supports d=2 only");
  BoundarySet bs = extract_boundary(g);  // throws on single-label grids
  DistanceField df_neg = distance_field(detail::flip_labels(g), cost);
  const double limit = cost.alpha - kReachabilitySlackCells * g.geom.cell_size;
  for (const BoundaryPoint& bp : bs.points) {
    if (bp.label != 1) continue;
    double worst = detail::sphere_max_negative_distance(df_neg, bp.center, cost);
    if (worst <= limit)
      return {true, ImpossibilityReason::SphereReachability, {bp.center}, worst, limit};
  }
  return {};
}

// The smooth-point shortcut: where the boundary is locally one clean line or
// arc, the only sphere point that can be protected is the one straight
// inward, so that single distance decides. Two arcs blending at a shallow
// angle can pass the smoothness gate with a normal rotated by several
// degrees, displacing the probe sideways into reach of the neighbouring
// lobe's negatives, so a candidate hit is confirmed against the full sphere
// before firing. At genuinely smooth points the inward point is the last one
// to fall, so the confirmation never blocks a true hit.
inline ImpossibilityReport check_normal_reachability(const LabelGrid& g, const CostModel& cost) {
  if (g.geom.dim != 2) throw std::invalid_argument("check_normal_reachability supports d=2 only");
  BoundarySet bs = extract_boundary(g);
  DistanceField df_neg = distance_field(detail::flip_labels(g), cost);
  const double limit = cost.alpha - kReachabilitySlackCells * g.geom.cell_size;
  for (const BoundaryPoint& bp : bs.points) {
    if (bp.label != 1) continue;
    std::optional<Vec> n = detail::smooth_inward_normal(bs, bp.center);
    if (!n) continue;
    Vec probe = bp.center + *n * cost.alpha;
    if (!detail::in_raster(df_neg.geom, probe)) continue;
    double d = df_neg.at_point(probe);
    if (d > limit) continue;
    if (detail::sphere_max_negative_distance(df_neg, bp.center, cost) > limit) continue;
    return {true, ImpossibilityReason::NormalPointReachability, {bp.center, probe}, d, limit};
  }
  return {};
}

// The four shape detectors, in a fixed order with the first hit winning.
// Everything walks cells and boundary points in flat-index order, so the
// verdict and witness are deterministic.
inline ImpossibilityReport detect_type(const LabelGrid& g, const CostModel& cost) {
  if (g.geom.dim != 2) throw std::invalid_argument("detect_type supports d=2 only");
  BoundarySet bs = extract_boundary(g);
  const double cell = g.geom.cell_size;
  const double alpha = cost.alpha;
  const double fit_limit = alpha - kRegionSlackCells * cell;

  std::vector<std::vector<size_t>> comps = detail::positive_components(g);

  // 1. A lobe small enough to hide inside one budget ball. A grown lobe
  // contains the full ball around its seed, so its covering radius is at
  // least alpha.
  for (const auto& comp : comps) {
    if (detail::touches_edge(g.geom, comp)) continue;
    std::vector<Vec> centers;
    centers.reserve(comp.size());
    double ext = 0.0;
    for (int a = 0; a < g.geom.dim; ++a) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (size_t c : comp) {
        double v = g.geom.center(c)[a];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ext = std::max(ext, hi - lo);
    }
    // covering radius under any of the norms is at least half the largest
    // axis extent; skip the iteration when that alone rules the test out
    if (ext / 2.0 > fit_limit + cell) continue;
    for (size_t c : comp) centers.push_back(g.geom.center(c));
    double r = detail::enclosing_radius(centers, cost.norm);
    if (r <= fit_limit) {
      Vec w = g.geom.center(detail::component_boundary_cell(g, comp));
      return {true, ImpossibilityReason::SmallPositiveRegion, {w}, r, fit_limit};
    }
  }

  // 2. A lobe that is long but nowhere deep: its interior never gets one
  // budget away from the boundary, which a grown lobe always does at the
  // seed.
  DistanceField df_neg = distance_field(detail::flip_labels(g), cost);
  for (const auto& comp : comps) {
    if (detail::touches_edge(g.geom, comp)) continue;
    double depth = 0.0;
    for (size_t c : comp) depth = std::max(depth, df_neg.dist[c]);
    if (depth <= fit_limit) {
      Vec w = g.geom.center(detail::component_boundary_cell(g, comp));
      return {true, ImpossibilityReason::NarrowPositiveStrip, {w}, depth, fit_limit};
    }
  }

  // 3. Boundary bending toward the positive side tighter than the budget
  // allows. The widest window that still reads as one clean model decides
  // each point: wide windows keep budget-sized arcs accurate (avoiding false
  // fires), and only genuinely tight features fall through to the narrow
  // ones. Eight cells is the floor -- tinier windows will fit a plausible
  // circle through the flank of a square corner. The probe-disk gate keeps
  // crossing-lobe creases -- not smooth, yet locally circle-like at small
  // scales -- from masquerading as tight arcs.
  const double kappa_gate = (1.0 / alpha) * (1.0 + 3.0 * cell / alpha);
  for (const BoundaryPoint& bp : bs.points) {
    if (bp.label != 1) continue;
    for (double wcells : {16.0, 12.0, 8.0}) {
      std::vector<Vec> pts = detail::fit_points(bs, bp.center, wcells * cell);
      if (pts.size() < 5) continue;
      detail::LineFit lf = detail::fit_line(pts);
      if (lf.rms < kLineRmsFactor * cell) break;  // straight: curvature 0
      detail::CircleFit cf = detail::fit_circle(pts);
      if (!cf.ok || cf.radius <= 0.0 || cf.rms > kCornerCircleRmsFactor * cell) continue;
      double side = dot(cf.center - bp.center, bp.normal) >= 0.0 ? 1.0 : -1.0;
      double kappa = side / cf.radius;
      if (kappa > kappa_gate &&
          detail::positive_fraction(g, bp.center, 6.0 * cell) < kTightArcFractionMax)
        return {true, ImpossibilityReason::LargePositiveCurvature, {bp.center}, kappa, kappa_gate};
      break;  // the first window with a clean model decides this point
    }
  }

  // 4. Two straight runs meeting in a kink that is convex toward the
  // positive side; growing by the budget rounds every such kink into an arc.
  // The probe-disk gate separates convex kinks (about a quarter positive)
  // from concave creases and smooth joins (half and up); kinks much shallower
  // than a right angle probe close to a half and are left to the
  // reachability tests.
  for (const BoundaryPoint& bp : bs.points) {
    if (bp.label != 1) continue;
    std::vector<const BoundaryPoint*> ribbon =
        detail::connected_window(bs, bp.center, 12.0 * cell);
    std::vector<const BoundaryPoint*> members;
    for (const BoundaryPoint* q : ribbon)
      if (q->label == 1) members.push_back(q);
    if (members.size() < 10) continue;
    std::vector<Vec> centers;
    centers.reserve(members.size());
    for (const BoundaryPoint* q : members) centers.push_back(q->center);
    detail::CircleFit whole = detail::fit_circle(centers);
    if (whole.ok && whole.rms <= kCornerCircleRmsFactor * cell) continue;  // one arc, no kink
    detail::LineFit axis = detail::fit_line(centers);

    auto leg_normal = [&](double lo, double hi) -> std::optional<Vec> {
      std::vector<Vec> ps;
      Vec mean_n = Vec::zero(2);
      for (const BoundaryPoint* q : members) {
        double t = dot(q->center - bp.center, axis.direction);
        if (t < lo || t > hi) continue;
        ps.push_back(q->center);
        mean_n += q->normal;
      }
      if (ps.size() < 4) return std::nullopt;
      detail::LineFit lf = detail::fit_line(ps);
      if (lf.rms > kLineRmsFactor * cell) return std::nullopt;
      Vec perp(-lf.direction[1], lf.direction[0]);
      return dot(perp, mean_n) >= 0.0 ? perp : perp * -1.0;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::optional<Vec> na = leg_normal(-inf, -cell);
    std::optional<Vec> nb = leg_normal(cell, inf);
    if (!na || !nb) continue;
    double angle = std::acos(std::clamp(dot(*na, *nb), -1.0, 1.0)) * 180.0 / M_PI;
    if (angle <= kCornerAngleMinDeg) continue;
    if (detail::positive_fraction(g, bp.center, 6.0 * cell) >= kCornerFractionMax) continue;
    return {true, ImpossibilityReason::ConvexPiecewiseLinear, {bp.center}, angle,
            kCornerAngleMinDeg};
  }

  return {};
}

inline ImpossibilityReport check_sphere_reachability(const Classifier& g, const Box& box,
                                                     const CostModel& cost, double resolution) {
  return check_sphere_reachability(rasterize(g, GridGeom::covering(box, resolution)), cost);
}

inline ImpossibilityReport check_normal_reachability(const Classifier& g, const Box& box,
                                                     const CostModel& cost, double resolution) {
  return check_normal_reachability(rasterize(g, GridGeom::covering(box, resolution)), cost);
}

inline ImpossibilityReport detect_type(const Classifier& g, const Box& box, const CostModel& cost,
                                       double resolution) {
  return detect_type(rasterize(g, GridGeom::covering(box, resolution)), cost);
}

}  // namespace strategex
