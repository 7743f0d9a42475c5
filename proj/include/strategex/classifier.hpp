#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "strategex/grid.hpp"
#include "strategex/monomials.hpp"
#include "strategex/vec.hpp"

namespace strategex {

enum class Polarity { PositiveInside, NegativeInside };

// ---------------------------------------------------------------------------
// Convex polygon helpers (d=2). Polytope classifiers take the convex hull of
// their vertex list; d=1 degenerates to an interval.
// ---------------------------------------------------------------------------

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain; returns the hull in counter-clockwise order.
inline std::vector<Vec> convex_hull(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Vec> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm_l2(p - (a + ab * t));
}

inline bool inside_convex_polygon(const std::vector<Vec>& hull, const Vec& p) {
  if (hull.size() < 3) {
    if (hull.empty()) return false;
    if (hull.size() == 1) return p == hull[0];
    return point_segment_distance(p, hull[0], hull[1]) == 0.0;
  }
  for (size_t i = 0; i < hull.size(); ++i) {
    const Vec& a = hull[i];
    const Vec& b = hull[(i + 1) % hull.size()];
    if (cross2(a, b, p) < 0.0) return false;  // hull is CCW
  }
  return true;
}

inline double distance_to_polygon_boundary(const std::vector<Vec>& hull, const Vec& p) {
  double best = std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return norm_l2(p - hull[0]);
  for (size_t i = 0; i < hull.size(); ++i)
    best = std::min(best, point_segment_distance(p, hull[i], hull[(i + 1) % hull.size()]));
  return best;
}

// ---------------------------------------------------------------------------
// Classifier variants. Prediction convention throughout: h(x) = 1 iff the
// score f(x) >= 0, so boundary points are classified positive.
// ---------------------------------------------------------------------------

struct Linear {
  Vec w;
  double b = 0.0;
};

struct Polynomial {
  int degree = 1;
  std::vector<double> coeffs;  // graded-lex monomial order, see monomials.hpp
};

// Union of Euclidean balls. polarity says which side is positive; the union
// boundary itself is always positive.
struct BallUnion {
  std::vector<Vec> centers;
  std::vector<double> radii;
  Polarity polarity = Polarity::PositiveInside;
};

struct Polytope {
  std::vector<Vec> vertices;  // convex hull of the given points (d <= 2)
  Polarity polarity = Polarity::PositiveInside;
};

struct GridSampled {
  LabelGrid grid;
};

struct ScoreFn {
  std::function<double(const Vec&)> f;
};

struct Classifier {
  int dimension = 2;
  std::variant<Linear, Polynomial, BallUnion, Polytope, GridSampled, ScoreFn> variant;

  static Classifier linear(const Vec& w, double b) {
    if (norm_l2(w) <= 0.0) throw std::invalid_argument("linear classifier needs ||w|| > 0");
    return Classifier{w.dim, Linear{w, b}};
  }

  static Classifier polynomial(int dim, int degree, std::vector<double> coeffs) {
    if (degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
    if (coeffs.size() != monomial_count(degree, dim))
      throw std::invalid_argument("coefficient count does not match the monomial basis");
    return Classifier{dim, Polynomial{degree, std::move(coeffs)}};
  }

  static Classifier ball_union(std::vector<Vec> centers, std::vector<double> radii,
                               Polarity polarity) {
    if (centers.empty() || centers.size() != radii.size())
      throw std::invalid_argument("ball union needs matching nonempty centers/radii");
    for (double r : radii)
      if (!(r > 0.0)) throw std::invalid_argument("ball radii must be positive");
    int dim = centers[0].dim;
    for (const Vec& c : centers)
      if (c.dim != dim) throw std::invalid_argument("ball centers have mixed dimensions");
    return Classifier{dim, BallUnion{std::move(centers), std::move(radii), polarity}};
  }

  static Classifier polytope(std::vector<Vec> vertices, Polarity polarity) {
    if (vertices.empty()) throw std::invalid_argument("polytope needs vertices");
    int dim = vertices[0].dim;
    if (dim > 2) throw std::invalid_argument("polytope classifiers support d <= 2");
    if (dim == 2) {
      vertices = convex_hull(std::move(vertices));
      if (vertices.size() < 3) throw std::invalid_argument("degenerate polytope (collinear vertices)");
    }
    return Classifier{dim, Polytope{std::move(vertices), polarity}};
  }

  static Classifier grid_sampled(LabelGrid grid) {
    int dim = grid.geom.dim;
    return Classifier{dim, GridSampled{std::move(grid)}};
  }

  static Classifier score_fn(int dim, std::function<double(const Vec&)> f) {
    return Classifier{dim, ScoreFn{std::move(f)}};
  }
};

// Raw score; the decision boundary is its zero set. GridSampled grids carry
// labels rather than scores, so they report +/-1.
inline double score(const Classifier& h, const Vec& x) {
  if (x.dim != h.dimension) throw std::invalid_argument("point/classifier dimension mismatch");
  struct Visitor {
    const Vec& x;
    double operator()(const Linear& l) const { return dot(l.w, x) - l.b; }
    double operator()(const Polynomial& p) const {
      double s = 0.0;
      const auto exps = monomial_exponents(p.degree, x.dim);
      for (size_t i = 0; i < exps.size(); ++i) s += p.coeffs[i] * eval_monomial(exps[i], x);
      return s;
    }
    double operator()(const BallUnion& bu) const {
      // signed distance into the nearest ball: >= 0 inside-or-boundary
      double best = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < bu.centers.size(); ++i)
        best = std::max(best, bu.radii[i] - norm_l2(x - bu.centers[i]));
      return bu.polarity == Polarity::PositiveInside ? best : -best;
    }
    double operator()(const Polytope& pt) const {
      double d, side;
      if (x.dim == 1) {
        double lo = pt.vertices[0][0], hi = lo;
        for (const Vec& v : pt.vertices) {
          lo = std::min(lo, v[0]);
          hi = std::max(hi, v[0]);
        }
        bool in = x[0] >= lo && x[0] <= hi;
        d = std::min(std::abs(x[0] - lo), std::abs(x[0] - hi));
        side = in ? 1.0 : -1.0;
      } else {
        bool in = inside_convex_polygon(pt.vertices, x);
        d = distance_to_polygon_boundary(pt.vertices, x);
        side = in ? 1.0 : -1.0;
      }
      double inside_score = side * d;  // zero exactly on the boundary
      return pt.polarity == Polarity::PositiveInside ? inside_score : -inside_score;
    }
    double operator()(const GridSampled& g) const {
      return g.grid.at(g.grid.geom.locate(x)) ? 1.0 : -1.0;
    }
    double operator()(const ScoreFn& s) const { return s.f(x); }
  };
  return std::visit(Visitor{x}, h.variant);
}

inline int predict(const Classifier& h, const Vec& x) { return score(h, x) >= 0.0 ? 1 : 0; }

// Like predict, but a grid-sampled classifier answers 0 outside its stored
// raster instead of throwing. Ball-sampling code probes past the domain edge
// and treats unknown territory as negative.
inline int predict_clamped(const Classifier& h, const Vec& x) {
  if (const GridSampled* gs = std::get_if<GridSampled>(&h.variant)) {
    const GridGeom& g = gs->grid.geom;
    for (int a = 0; a < g.dim; ++a) {
      double t = (x[a] - g.origin[a]) / g.cell_size;
      if (t < 0.0 || t > static_cast<double>(g.shape[a])) return 0;
    }
  }
  return predict(h, x);
}

}  // namespace strategex
