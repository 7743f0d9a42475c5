#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/grid.hpp"
#include "strategex/response.hpp"

namespace strategex {

struct BoundaryPoint {
  size_t cell = 0;   // flat index into the source grid
  Vec center;        // world coordinates of the cell center
  Vec normal;        // unit vector toward the positive region
  int label = 0;     // the cell's own label (boundary cells come in pairs)
};

// Boundary cells of a label grid, in flat-index order (deterministic).
struct BoundarySet {
  GridGeom geom;
  std::vector<BoundaryPoint> points;
};

namespace detail {

// Mean label over the 3^d cube around idx, clamped at the grid edge.
inline double smoothed_label(const LabelGrid& g, const std::array<int, 3>& idx) {
  double sum = 0.0;
  int n = 0;
  const int zr = g.geom.dim > 2 ? 1 : 0;
  const int yr = g.geom.dim > 1 ? 1 : 0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -yr; dy <= yr; ++dy)
      for (int dz = -zr; dz <= zr; ++dz) {
        std::array<int, 3> nb{idx[0] + dx, idx[1] + dy, idx[2] + dz};
        if (!g.geom.in_bounds(nb)) continue;
        sum += g.at(nb);
        ++n;
      }
  return sum / n;
}

inline Vec label_gradient(const LabelGrid& g, const std::array<int, 3>& idx) {
  Vec grad = Vec::zero(g.geom.dim);
  for (int a = 0; a < g.geom.dim; ++a) {
    std::array<int, 3> lo = idx, hi = idx;
    lo[a] -= 1;
    hi[a] += 1;
    double l = g.geom.in_bounds(lo) ? smoothed_label(g, lo) : smoothed_label(g, idx);
    double h = g.geom.in_bounds(hi) ? smoothed_label(g, hi) : smoothed_label(g, idx);
    grad[a] = h - l;
  }
  return grad;
}

}  // namespace detail

inline BoundarySet extract_boundary(const LabelGrid& grid) {
  if (!grid.has_both_labels())
    throw std::invalid_argument("extract_boundary: grid carries a single label");
  BoundarySet bs;
  bs.geom = grid.geom;
  const int d = grid.geom.dim;
  for (size_t i = 0; i < grid.labels.size(); ++i) {
    auto idx = grid.geom.unindex(i);
    bool edge = false;
    for (int a = 0; a < d && !edge; ++a) {
      for (int s = -1; s <= 1 && !edge; s += 2) {
        auto nb = idx;
        nb[a] += s;
        if (grid.geom.in_bounds(nb) && grid.at(nb) != grid.labels[i]) edge = true;
      }
    }
    if (!edge) continue;

    Vec grad = detail::label_gradient(grid, idx);
    Vec n;
    if (norm_l2(grad) > 1e-12) {
      n = normalized(grad);
    } else {
      // degenerate neighborhood (e.g. checkerboard): point at any positive
      // axis neighbor, or +x as a last resort
      n = Vec::zero(d);
      n[0] = 1.0;
      for (int a = 0; a < d; ++a)
        for (int s = -1; s <= 1; s += 2) {
          auto nb = idx;
          nb[a] += s;
          if (grid.geom.in_bounds(nb) && grid.at(nb) == 1 && grid.labels[i] == 0) {
            n = Vec::zero(d);
            n[a] = s;
            a = d;
            break;
          }
        }
    }
    bs.points.push_back(BoundaryPoint{i, grid.geom.center(idx), n, grid.labels[i]});
  }
  return bs;
}

// ---------------------------------------------------------------------------
// Curvature estimation: least-squares circle through the boundary points in
// a window, with a line-model fallback deciding kappa = 0.
// ---------------------------------------------------------------------------

struct CurvatureSample {
  Vec point;
  double kappa = 0.0;  // signed, 1/length units; > 0 bends toward positive
  Vec normal;
};

// RMS below which a window of boundary cells counts as straight, relative to
// cell size. One-sided rasterized lines measure 0 when axis-aligned or
// diagonal and up to ~0.28 cells at awkward slopes, while arcs with radii up
// to ~30 cells clear 0.45 once the window is 12 cells or wider.
constexpr double kLineRmsFactor = 0.35;

namespace detail {

struct LineFit {
  Vec centroid, direction;
  double rms = 0.0;
};

inline LineFit fit_line(const std::vector<Vec>& pts) {
  LineFit lf;
  lf.centroid = Vec::zero(2);
  for (const Vec& p : pts) lf.centroid += p;
  lf.centroid *= 1.0 / pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const Vec& p : pts) {
    double dx = p[0] - lf.centroid[0], dy = p[1] - lf.centroid[1];
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  // principal eigenvector of the 2x2 scatter, taken from whichever row of
  // (M - lambda I) is better conditioned: (lam-syy, sxy) degenerates for a
  // near-vertical cloud and (sxy, lam-sxx) for a near-horizontal one
  double tr = sxx + syy, det = sxx * syy - sxy * sxy;
  double lam = tr / 2.0 + std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  Vec row1(lam - syy, sxy), row2(sxy, lam - sxx);
  Vec dir = norm_l2(row1) >= norm_l2(row2) ? row1 : row2;
  if (norm_l2(dir) < 1e-18) dir = sxx >= syy ? Vec(1, 0) : Vec(0, 1);
  lf.direction = normalized(dir);
  double sum2 = 0.0;
  for (const Vec& p : pts) {
    Vec d = p - lf.centroid;
    double perp = d[0] * (-lf.direction[1]) + d[1] * lf.direction[0];
    sum2 += perp * perp;
  }
  lf.rms = std::sqrt(sum2 / pts.size());
  return lf;
}

struct CircleFit {
  Vec center;
  double radius = 0.0;
  double rms = 0.0;
  bool ok = false;
};

// Kasa algebraic fit: x^2+y^2 = a*x + b*y + c solved by 3x3 normal equations.
inline CircleFit fit_circle(const std::vector<Vec>& pts) {
  double m[3][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  for (const Vec& p : pts) {
    double row[3] = {p[0], p[1], 1.0};
    double rhs = p[0] * p[0] + p[1] * p[1];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
      m[i][3] += row[i] * rhs;
    }
  }
  // Gaussian elimination with partial pivoting
  CircleFit cf;
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12) return cf;  // singular: collinear points
    std::swap(m[piv], m[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  double a = m[0][3] / m[0][0], b = m[1][3] / m[1][1], c = m[2][3] / m[2][2];
  cf.center = Vec(a / 2.0, b / 2.0);
  double r2 = c + a * a / 4.0 + b * b / 4.0;
  if (!(r2 > 0.0)) return cf;
  cf.radius = std::sqrt(r2);
  double sum2 = 0.0;
  for (const Vec& p : pts) {
    double e = norm_l2(p - cf.center) - cf.radius;
    sum2 += e * e;
  }
  cf.rms = std::sqrt(sum2 / pts.size());
  cf.ok = true;
  return cf;
}

inline const BoundaryPoint& nearest_boundary_point(const BoundarySet& bs, const Vec& at) {
  const BoundaryPoint* best = nullptr;
  double bd = std::numeric_limits<double>::infinity();
  for (const BoundaryPoint& bp : bs.points) {
    double d = norm_l2(bp.center - at);
    if (d < bd) {
      bd = d;
      best = &bp;
    }
  }
  return *best;
}

inline std::vector<Vec> window_points(const BoundarySet& bs, const Vec& at, double window) {
  std::vector<Vec> pts;
  for (const BoundaryPoint& bp : bs.points)
    if (norm_l2(bp.center - at) <= window) pts.push_back(bp.center);
  return pts;
}

// Boundary cells within the window that are 8-connected, through other
// boundary cells, to the one nearest `at`. A Euclidean window alone would mix
// in unrelated boundary pieces whenever two of them pass within the window
// radius (opposite banks of a thin channel, facing rims of nearby balls), and
// any fit through such a mixture is meaningless.
inline std::vector<const BoundaryPoint*> connected_window(const BoundarySet& bs, const Vec& at,
                                                          double window) {
  std::vector<size_t> cells(bs.points.size());
  for (size_t i = 0; i < bs.points.size(); ++i) cells[i] = bs.points[i].cell;
  auto locate = [&](size_t cell) -> long {
    auto it = std::lower_bound(cells.begin(), cells.end(), cell);
    if (it == cells.end() || *it != cell) return -1;
    return it - cells.begin();
  };

  size_t start = &nearest_boundary_point(bs, at) - bs.points.data();
  std::vector<char> seen(bs.points.size(), 0);
  std::vector<size_t> queue{start};
  seen[start] = 1;
  std::vector<const BoundaryPoint*> out;
  const int d = bs.geom.dim;
  while (!queue.empty()) {
    size_t i = queue.back();
    queue.pop_back();
    out.push_back(&bs.points[i]);
    auto idx = bs.geom.unindex(bs.points[i].cell);
    const int yr = d > 1 ? 1 : 0, zr = d > 2 ? 1 : 0;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -yr; dy <= yr; ++dy)
        for (int dz = -zr; dz <= zr; ++dz) {
          std::array<int, 3> nb{idx[0] + dx, idx[1] + dy, idx[2] + dz};
          if (!bs.geom.in_bounds(nb)) continue;
          long j = locate(bs.geom.index(nb));
          if (j < 0 || seen[j]) continue;
          if (norm_l2(bs.points[j].center - at) > window) continue;
          seen[j] = 1;
          queue.push_back(static_cast<size_t>(j));
        }
  }
  return out;
}

// Window restricted to one side of the boundary ribbon through `at`. The
// ribbon is two cells thick; fitting through just the positive-side cells
// halves the thickness noise, which otherwise dominates radius estimates.
// Falls back to both sides when the positive side alone is too sparse.
inline std::vector<Vec> fit_points(const BoundarySet& bs, const Vec& at, double window) {
  std::vector<const BoundaryPoint*> ribbon = connected_window(bs, at, window);
  std::vector<Vec> pts;
  for (const BoundaryPoint* bp : ribbon)
    if (bp->label == 1) pts.push_back(bp->center);
  if (pts.size() < 5) {
    pts.clear();
    for (const BoundaryPoint* bp : ribbon) pts.push_back(bp->center);
  }
  return pts;
}

// Share of positively-labelled cells within an L2 disk around x. Cells past
// the grid edge are left out of the denominator.
inline double positive_fraction(const LabelGrid& g, const Vec& x, double radius) {
  long long pos = 0, total = 0;
  for (size_t i = 0; i < g.labels.size(); ++i) {
    if (norm_l2(g.geom.center(g.geom.unindex(i)) - x) > radius) continue;
    ++total;
    pos += g.labels[i];
  }
  return total > 0 ? static_cast<double>(pos) / total : 0.0;
}

// Boundary normal re-estimated from a model fit over a window, oriented to
// agree with the raster-gradient normal of the nearest boundary cell. Much
// less angular noise than the gradient alone; falls back to it when the
// window is too sparse to fit.
inline Vec refined_normal(const BoundarySet& bs, const Vec& at, double window) {
  const BoundaryPoint& anchor = nearest_boundary_point(bs, at);
  std::vector<Vec> pts = fit_points(bs, at, window);
  if (pts.size() < 5) return anchor.normal;
  LineFit lf = fit_line(pts);
  if (lf.rms < kLineRmsFactor * bs.geom.cell_size) {
    Vec perp(-lf.direction[1], lf.direction[0]);
    return dot(perp, anchor.normal) >= 0.0 ? perp : perp * -1.0;
  }
  CircleFit cf = fit_circle(pts);
  if (!cf.ok || cf.radius <= 0.0) return anchor.normal;
  Vec radial = anchor.center - cf.center;
  if (norm_l2(radial) < 1e-12) return anchor.normal;
  Vec u = normalized(radial);
  return dot(u, anchor.normal) >= 0.0 ? u : u * -1.0;
}

}  // namespace detail

inline CurvatureSample signed_curvature(const BoundarySet& bs, const Vec& at, double window) {
  if (bs.geom.dim != 2) throw std::invalid_argument("signed_curvature supports d=2 only");
  if (window < 3.0 * bs.geom.cell_size)
    throw std::invalid_argument("curvature window smaller than 3 cells");
  std::vector<Vec> pts = detail::fit_points(bs, at, window);
  if (pts.size() < 5) throw std::invalid_argument("fewer than 5 boundary points in window");

  const BoundaryPoint& anchor = detail::nearest_boundary_point(bs, at);
  CurvatureSample cs;
  cs.point = anchor.center;
  cs.normal = anchor.normal;

  detail::LineFit lf = detail::fit_line(pts);
  if (lf.rms < kLineRmsFactor * bs.geom.cell_size) {
    cs.kappa = 0.0;
    return cs;
  }
  detail::CircleFit cf = detail::fit_circle(pts);
  if (!cf.ok || cf.radius <= 0.0) {
    cs.kappa = 0.0;
    return cs;
  }
  double side = dot(cf.center - anchor.center, anchor.normal) >= 0.0 ? 1.0 : -1.0;
  cs.kappa = side / cf.radius;
  return cs;
}

// ---------------------------------------------------------------------------
// The curvature map kappa -> kappa / (1 + alpha*kappa).
// ---------------------------------------------------------------------------

// Raised for boundary curvature below -1/alpha: such a point leaves no trace
// on the effective boundary at all.
struct WipedOutError : std::domain_error {
  WipedOutError() : std::domain_error("curvature below -1/alpha: point is wiped out") {}
};

// Signed curvature of the effective boundary at the image of a point with
// source curvature kappa. Exactly at kappa = -1/alpha the image is a kink of
// unbounded curvature, reported as +infinity.
inline double effective_curvature(double kappa, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double limit = -1.0 / alpha;
  if (kappa < limit) throw WipedOutError{};
  if (kappa == limit) return std::numeric_limits<double>::infinity();
  return kappa / (1.0 + alpha * kappa);
}

// ---------------------------------------------------------------------------
// Point-mapping analysis: preimages on the cost sphere and the case split.
// ---------------------------------------------------------------------------

namespace detail {

// Unit vectors of the cost-norm sphere, at roughly uniform angles.
inline std::vector<Vec> sphere_directions(const CostModel& cost, int n) {
  std::vector<Vec> dirs;
  dirs.reserve(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * i / n;
    Vec u(std::cos(a), std::sin(a));
    dirs.push_back(u * (1.0 / cost.length(u)));
  }
  return dirs;
}

inline bool on_decision_boundary(const Classifier& h, const Vec& x, double resolution) {
  if (std::abs(score(h, x)) <= 1e-9) return true;
  int lo = 1, hi = 0;
  for (int a = 0; a < x.dim; ++a)
    for (int s = -1; s <= 1; s += 2) {
      Vec p = x;
      p[a] += s * resolution;
      int l = predict_clamped(h, p);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  int self = predict_clamped(h, x);
  lo = std::min(lo, self);
  hi = std::max(hi, self);
  return lo != hi;
}

}  // namespace detail

// Negative points on the cost sphere S_alpha(x) whose best response lands
// (within 1.5 sample cells) at x. For a smooth boundary this is the single
// point one budget-length out along the inward normal.
//
// A sample sitting exactly one budget away from the positive region is a
// tangency: the intersection of its budget ball with the positive region has
// measure zero, so a lattice search finds no target at all. Such a sample can
// still reach x itself (the boundary is positive), and nothing is more than
// marginally cheaper, so it counts. Cost ties within lattice quantization are
// counted toward the preimage rather than broken arbitrarily.
inline std::vector<Vec> preimage_set(const Classifier& h, const Vec& x, const CostModel& cost,
                                     double resolution) {
  if (h.dimension != 2) throw std::invalid_argument("preimage_set supports d=2 only");
  if (!detail::on_decision_boundary(h, x, resolution))
    throw std::invalid_argument("preimage_set: x is not on the decision boundary");
  int n = std::max(64, static_cast<int>(std::ceil(2.0 * M_PI * cost.alpha / resolution)));
  std::vector<Vec> out;
  for (const Vec& u : detail::sphere_directions(cost, n)) {
    Vec s = x + u * cost.alpha;
    if (predict_clamped(h, s) != 0) continue;
    BestResponseResult br = best_response_generic(h, s, cost, resolution);
    bool lands_at_x = br.moved && norm_l2(br.target - x) <= 1.5 * resolution;
    if (!br.moved) lands_at_x = predict_clamped(h, x) == 1;
    if (lands_at_x) out.push_back(s);
  }
  return out;
}

enum class MappingKind { OneToOne, DirectWipeout, IndirectWipeout, Expansion, Collision };

inline const char* mapping_kind_name(MappingKind k) {
  switch (k) {
    case MappingKind::OneToOne: return "one_to_one";
    case MappingKind::DirectWipeout: return "direct_wipeout";
    case MappingKind::IndirectWipeout: return "indirect_wipeout";
    case MappingKind::Expansion: return "expansion";
    case MappingKind::Collision: return "collision";
  }
  return "?";
}

struct MappingCase {
  MappingKind kind = MappingKind::OneToOne;
  std::vector<Vec> witness;  // preimage arc (Expansion) or colliding sources (Collision)
};

// Circle-fit RMS (relative to cell size) above which a boundary window is not
// a single smooth arc, and the largest share of positive cells in a probe
// disk that still reads as a convex corner. Measured on one-sided fits over a
// 12-cell window: true arcs stay under 0.33 while right-angle kinks reach
// ~0.74. A quarter-plane corner probes at 0.25, a straight edge at 0.50, and
// smooth arcs stay above 0.39 down to radii of a few cells, so the two gates
// together single out convex kinks.
constexpr double kCornerCircleRmsFactor = 0.45;
constexpr double kCornerFractionMax = 0.34;

// How a boundary point of h maps onto the effective boundary. Works on a
// local raster around x (half-width 2*alpha) at the given resolution.
inline MappingCase classify_boundary_point(const Classifier& h, const Vec& x,
                                           const CostModel& cost, double resolution) {
  if (h.dimension != 2) throw std::invalid_argument("classify_boundary_point supports d=2 only");
  const double alpha = cost.alpha;
  const double half = 2.0 * alpha + 10.0 * resolution;
  Box local = Box::of(Vec(x[0] - half, x[1] - half), Vec(x[0] + half, x[1] + half));
  LabelGrid raster = rasterize(h, GridGeom::covering(local, resolution));
  if (!raster.has_both_labels())
    throw std::invalid_argument("classify_boundary_point: x is not on the decision boundary");
  BoundarySet bs = extract_boundary(raster);

  // Source curvature at x. A 16-cell window keeps radius estimates within a
  // few percent for radii up to ~2 units; at a concave kink the fit collapses
  // to a small circle on the negative side, which is the right verdict since
  // a kink's one-sided curvature is unbounded there.
  double kappa = signed_curvature(bs, x, 16.0 * resolution).kappa;
  const double fire = -(1.0 / alpha) * (1.0 + 3.0 * resolution / alpha);
  if (kappa < fire) return {MappingKind::DirectWipeout, {}};

  std::vector<Vec> pre = preimage_set(h, x, cost, resolution);

  // A convex kink fans out into a budget-sphere arc. Tangency smears any
  // span measurement on the preimage itself over ~sqrt(resolution) arcs, so
  // detect the kink on the source side instead: the window fits no single
  // circle, yet the positive share in a probe disk says "wedge", not
  // "crease". The preimage samples are the arc witness.
  if (!pre.empty()) {
    std::vector<Vec> wpts = detail::fit_points(bs, x, 12.0 * resolution);
    if (wpts.size() >= 5) {
      detail::CircleFit cf = detail::fit_circle(wpts);
      bool smooth_arc = cf.ok && cf.rms <= kCornerCircleRmsFactor * resolution;
      double frac = detail::positive_fraction(raster, x, 6.0 * resolution);
      if (!smooth_arc && frac < kCornerFractionMax) return {MappingKind::Expansion, pre};
    }
  }

  // Collision: well-separated source boundary points whose one-to-one images
  // land on x's image point (normals re-fit to keep image error well under a
  // cell). This must be settled before reading anything into an empty
  // preimage: competing sheets squeeze a colliding point's preimage to a
  // sliver no sample hits.
  Vec image = x - detail::refined_normal(bs, x, 12.0 * resolution) * alpha;
  std::vector<Vec> coincident;
  for (const BoundaryPoint& bp : bs.points) {
    Vec coarse = bp.center - bp.normal * alpha;
    if (norm_l2(coarse - image) > 4.0 * resolution) continue;
    Vec img = bp.center - detail::refined_normal(bs, bp.center, 12.0 * resolution) * alpha;
    if (norm_l2(img - image) <= resolution) coincident.push_back(bp.center);
  }
  std::vector<Vec> witness;
  for (const Vec& c : coincident) {
    bool far = true;
    for (const Vec& w : witness)
      if (norm_l2(c - w) <= 3.0 * resolution) far = false;
    if (far) witness.push_back(c);
  }
  if (witness.size() >= 3) return {MappingKind::Collision, witness};

  if (pre.empty()) return {MappingKind::IndirectWipeout, {}};
  return {MappingKind::OneToOne, {}};
}

}  // namespace strategex
