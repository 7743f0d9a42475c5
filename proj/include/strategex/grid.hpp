#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strategex/vec.hpp"

namespace strategex {

// Axis-aligned analysis box. lo/hi are corner points with lo <= hi per axis.
struct Box {
  Vec lo, hi;

  int dim() const { return lo.dim; }

  static Box of(const Vec& lo, const Vec& hi) {
    if (lo.dim != hi.dim) throw std::invalid_argument("box corner dims differ");
    for (int i = 0; i < lo.dim; ++i)
      if (!(lo[i] < hi[i])) throw std::invalid_argument("box must have lo < hi on every axis");
    return Box{lo, hi};
  }

  Box padded(double pad) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= pad;
      b.hi[i] += pad;
    }
    return b;
  }

  bool contains(const Vec& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

// Uniform raster over a box: origin corner, square cells, shape[i] cells on
// axis i. Cell centers sit at origin + (index + 1/2) * cell_size.
struct GridGeom {
  Vec origin;
  double cell_size = 1.0;
  std::array<int, 3> shape{1, 1, 1};
  int dim = 2;

  size_t cell_count() const {
    size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<size_t>(shape[i]);
    return n;
  }

  // Row-major with axis 0 outermost: index = ((i0*s1)+i1)*s2+i2.
  size_t index(const std::array<int, 3>& idx) const {
    size_t r = 0;
    for (int i = 0; i < dim; ++i) r = r * static_cast<size_t>(shape[i]) + static_cast<size_t>(idx[i]);
    return r;
  }

  std::array<int, 3> unindex(size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(flat % static_cast<size_t>(shape[i]));
      flat /= static_cast<size_t>(shape[i]);
    }
    return idx;
  }

  bool in_bounds(const std::array<int, 3>& idx) const {
    for (int i = 0; i < dim; ++i)
      if (idx[i] < 0 || idx[i] >= shape[i]) return false;
    return true;
  }

  Vec center(const std::array<int, 3>& idx) const {
    Vec p = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) p[i] = origin[i] + (idx[i] + 0.5) * cell_size;
    return p;
  }

  Vec center(size_t flat) const { return center(unindex(flat)); }

  // Index of the cell containing p; throws when p falls outside the raster.
  std::array<int, 3> locate(const Vec& p) const {
    if (p.dim != dim) throw std::invalid_argument("point dimension does not match grid");
    std::array<int, 3> idx{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      double t = (p[i] - origin[i]) / cell_size;
      int c = static_cast<int>(std::floor(t));
      if (c == shape[i] && t <= static_cast<double>(shape[i]))
        c = shape[i] - 1;  // top edge belongs to the last cell
      if (c < 0 || c >= shape[i]) throw std::out_of_range("point outside grid bounds");
      idx[i] = c;
    }
    return idx;
  }

  // Smallest raster of this cell size whose cells cover the box exactly
  // (hi corner rounded up to a whole cell).
  static GridGeom covering(const Box& box, double cell_size) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be positive");
    GridGeom g;
    g.origin = box.lo;
    g.cell_size = cell_size;
    g.dim = box.dim();
    for (int i = 0; i < g.dim; ++i) {
      double span = box.hi[i] - box.lo[i];
      g.shape[i] = std::max(1, static_cast<int>(std::ceil(span / cell_size - 1e-9)));
    }
    return g;
  }
};

// Binary label raster. labels[i] in {0,1}, stored unpacked for cheap access;
// serialization packs to bits.
struct LabelGrid {
  GridGeom geom;
  std::vector<uint8_t> labels;
  // Set when the grid was produced by an operation whose positive source
  // region was empty (the result is all-zero by construction).
  bool empty_positive_warning = false;

  size_t size() const { return labels.size(); }

  uint8_t at(const std::array<int, 3>& idx) const { return labels[geom.index(idx)]; }
  uint8_t& at(const std::array<int, 3>& idx) { return labels[geom.index(idx)]; }

  static LabelGrid zeros(const GridGeom& g) {
    LabelGrid lg;
    lg.geom = g;
    lg.labels.assign(g.cell_count(), 0);
    return lg;
  }

  size_t count_positive() const {
    size_t n = 0;
    for (uint8_t b : labels) n += b;
    return n;
  }

  bool has_both_labels() const {
    size_t p = count_positive();
    return p > 0 && p < labels.size();
  }
};

// Per-cell distance to the nearest positive cell center (world units, under
// some cost norm). Distance 0 exactly on positive cells; infinity when the
// grid has no positive cell at all.
struct DistanceField {
  GridGeom geom;
  std::vector<double> dist;

  double at(const std::array<int, 3>& idx) const { return dist[geom.index(idx)]; }

  // Distance at an arbitrary point, taken from the containing cell. One
  // cell of slack is the caller's responsibility.
  double at_point(const Vec& p) const { return dist[geom.index(geom.locate(p))]; }
};

}  // namespace strategex
