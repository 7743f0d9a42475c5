#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/distance_transform.hpp"
#include "strategex/grid.hpp"

namespace strategex {

struct BestResponseResult {
  bool moved = false;
  Vec target;
  double cost_paid = 0.0;
};

// Closed-form best response against a linear classifier under l2 cost: the
// orthogonal projection onto the hyperplane if it is affordable, otherwise
// stay put. Other norms go through best_response_generic.
inline BestResponseResult best_response_linear(const Classifier& h, const Vec& x,
                                               const CostModel& cost) {
  const Linear* lin = std::get_if<Linear>(&h.variant);
  if (!lin) throw std::invalid_argument("best_response_linear needs a linear classifier");
  if (cost.norm != Norm::L2)
    throw std::invalid_argument("closed form is defined for l2 cost; use best_response_generic");
  if (predict(h, x) == 1) return {false, x, 0.0};
  double w2 = dot(lin->w, lin->w);
  Vec proj = x - lin->w * ((dot(lin->w, x) - lin->b) / w2);
  double c = cost.cost(x, proj);
  if (c <= cost.alpha) return {true, proj, c};
  return {false, x, 0.0};
}

namespace detail {

// Deterministic lattice sampling of the cost ball: offsets sorted by cost,
// then lexicographically, so ties always resolve the same way.
inline std::vector<Vec> ball_lattice(const CostModel& cost, int dim, double resolution) {
  int K = static_cast<int>(std::floor(cost.alpha / resolution + 1e-9));
  std::vector<Vec> offsets;
  auto consider = [&](const Vec& o) {
    if (cost.length(o) <= cost.alpha * (1.0 + 1e-12)) offsets.push_back(o);
  };
  if (dim == 1) {
    for (int i = -K; i <= K; ++i) consider(Vec(i * resolution));
  } else if (dim == 2) {
    for (int i = -K; i <= K; ++i)
      for (int j = -K; j <= K; ++j) consider(Vec(i * resolution, j * resolution));
  } else {
    for (int i = -K; i <= K; ++i)
      for (int j = -K; j <= K; ++j)
        for (int k = -K; k <= K; ++k)
          consider(Vec(i * resolution, j * resolution, k * resolution));
  }
  std::sort(offsets.begin(), offsets.end(), [&](const Vec& a, const Vec& b) {
    double ca = cost.length(a), cb = cost.length(b);
    if (ca != cb) return ca < cb;
    return lex_less(a, b);
  });
  return offsets;
}

inline void require_resolution(const CostModel& cost, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (resolution > cost.alpha / 2.0)
    throw std::invalid_argument("resolution coarser than alpha/2 undersamples the ball");
}

}  // namespace detail

// Would x be classified positive after its best response? Exact for linear,
// ball-union (l2 cost, and disjoint balls when negative-inside), polytope
// (l2 cost) and grid-sampled variants; other variants sample the ball at the
// given resolution.
inline int effective_label(const Classifier& h, const Vec& x, const CostModel& cost,
                           double resolution) {
  if (x.dim != h.dimension) throw std::invalid_argument("point/classifier dimension mismatch");
  if (cost.alpha == 0.0) return predict(h, x);

  if (const Linear* lin = std::get_if<Linear>(&h.variant)) {
    // max of w.x' over the cost ball is w.x + alpha*||w||_dual
    return dot(lin->w, x) - lin->b + cost.alpha * cost.dual_norm(lin->w) >= 0.0 ? 1 : 0;
  }

  if (cost.norm == Norm::L2) {
    if (const BallUnion* bu = std::get_if<BallUnion>(&h.variant)) {
      if (bu->polarity == Polarity::PositiveInside) {
        for (size_t i = 0; i < bu->centers.size(); ++i)
          if (norm_l2(x - bu->centers[i]) - bu->radii[i] <= cost.alpha) return 1;
        return 0;
      }
      // negative-inside: exact when balls are pairwise disjoint (the nearest
      // point of the complement is then straight out of the containing ball)
      bool disjoint = true;
      for (size_t i = 0; i < bu->centers.size() && disjoint; ++i)
        for (size_t j = i + 1; j < bu->centers.size() && disjoint; ++j)
          if (norm_l2(bu->centers[i] - bu->centers[j]) <= bu->radii[i] + bu->radii[j])
            disjoint = false;
      if (disjoint) {
        for (size_t i = 0; i < bu->centers.size(); ++i) {
          double depth = bu->radii[i] - norm_l2(x - bu->centers[i]);
          if (depth > 0.0) return depth <= cost.alpha ? 1 : 0;
        }
        return 1;  // outside every ball: already positive
      }
    }
    if (const Polytope* pt = std::get_if<Polytope>(&h.variant)) {
      if (h.dimension == 2) {
        bool inside = inside_convex_polygon(pt->vertices, x);
        double d = distance_to_polygon_boundary(pt->vertices, x);
        if (pt->polarity == Polarity::PositiveInside)
          return (inside || d <= cost.alpha) ? 1 : 0;
        return (!inside || d <= cost.alpha) ? 1 : 0;
      }
    }
  }

  if (const GridSampled* gs = std::get_if<GridSampled>(&h.variant)) {
    // nearest positive cell center of the stored grid
    const LabelGrid& g = gs->grid;
    for (size_t i = 0; i < g.labels.size(); ++i)
      if (g.labels[i] && cost.cost(g.geom.center(i), x) <= cost.alpha) return 1;
    return 0;
  }

  if (predict(h, x) == 1) return 1;
  detail::require_resolution(cost, resolution);
  for (const Vec& o : detail::ball_lattice(cost, h.dimension, resolution))
    if (predict(h, x + o) == 1) return 1;
  return 0;
}

// Generic best response by deterministic ball sampling: the cheapest
// positively-labeled sample point, ties broken lexicographically.
inline BestResponseResult best_response_generic(const Classifier& h, const Vec& x,
                                                const CostModel& cost, double resolution) {
  if (predict(h, x) == 1) return {false, x, 0.0};
  if (cost.alpha == 0.0) return {false, x, 0.0};
  detail::require_resolution(cost, resolution);
  for (const Vec& o : detail::ball_lattice(cost, h.dimension, resolution)) {
    Vec target = x + o;
    if (predict_clamped(h, target) == 1) return {true, target, cost.length(o)};
  }
  return {false, x, 0.0};
}

// Rasterize h on a grid. Grid-sampled classifiers answer 0 outside their own
// domain so callers may rasterize onto padded boxes.
inline LabelGrid rasterize(const Classifier& h, const GridGeom& geom) {
  LabelGrid out = LabelGrid::zeros(geom);
  const bool is_grid = std::holds_alternative<GridSampled>(h.variant);
  for (size_t i = 0; i < out.labels.size(); ++i) {
    Vec c = geom.center(i);
    if (is_grid) {
      const LabelGrid& src = std::get<GridSampled>(h.variant).grid;
      bool inside = true;
      for (int a = 0; a < geom.dim; ++a) {
        double t = (c[a] - src.geom.origin[a]) / src.geom.cell_size;
        if (t < 0.0 || t > src.geom.shape[a]) inside = false;
      }
      out.labels[i] = inside ? static_cast<uint8_t>(predict(h, c)) : 0;
    } else {
      out.labels[i] = static_cast<uint8_t>(predict(h, c));
    }
  }
  return out;
}

// The effective classifier on a raster: a cell is positive iff its center is
// within alpha of some positive cell center of the rasterized h. Computed by
// rasterizing on a box padded by alpha (whole cells, so no box-edge
// artifacts), one exact distance transform, and a threshold at alpha.
inline LabelGrid effective_grid(const Classifier& h, const Box& box, double cell_size,
                                const CostModel& cost) {
  if (!(cost.alpha >= 2.0 * cell_size))
    throw std::invalid_argument("effective_grid needs alpha >= 2*cell_size");
  GridGeom inner = GridGeom::covering(box, cell_size);
  const int pad = static_cast<int>(std::ceil(cost.alpha / cell_size - 1e-9));
  GridGeom padded = inner;
  for (int a = 0; a < inner.dim; ++a) {
    padded.origin[a] -= pad * cell_size;
    padded.shape[a] += 2 * pad;
  }

  LabelGrid raster = rasterize(h, padded);
  LabelGrid out = LabelGrid::zeros(inner);
  if (raster.count_positive() == 0) {
    out.empty_positive_warning = true;
    return out;
  }

  DistanceField df = distance_field(raster, cost);
  const double thresh = cost.alpha * (1.0 + 1e-12);
  std::array<int, 3> idx{0, 0, 0};
  for (size_t i = 0; i < out.labels.size(); ++i) {
    idx = inner.unindex(i);
    std::array<int, 3> pidx{idx[0] + pad, idx[1] + pad, idx[2] + pad};
    for (int a = inner.dim; a < 3; ++a) pidx[a] = 0;
    out.labels[i] = df.at(pidx) <= thresh ? 1 : 0;
  }
  return out;
}

}  // namespace strategex
