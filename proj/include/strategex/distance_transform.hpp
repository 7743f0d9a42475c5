#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "strategex/cost.hpp"
#include "strategex/grid.hpp"

namespace strategex {

namespace detail {

constexpr double kDtInf = 1e20;

// 1d lower-envelope transform of f under squared distance (Felzenszwalb &
// Huttenlocher): d[q] = min_p (q-p)^2 + f[p]. Inputs are integers-of-cells
// (or kDtInf), so all distance values are exact integer sums of squares.
inline void dt1d_squared(const std::vector<double>& f, std::vector<double>& d,
                         std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  d.resize(f.size());
  v.resize(f.size());
  z.resize(f.size() + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kDtInf;
  z[1] = +kDtInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = +kDtInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = q - double(v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

// Apply dt1d_squared along one axis of a row-major d<=3 volume.
inline void dt_axis_squared(std::vector<double>& g, const GridGeom& geom, int axis) {
  const int n = geom.shape[axis];
  if (n <= 1) return;
  // iterate all lines along `axis`
  std::array<int, 3> idx{0, 0, 0};
  std::vector<double> f(n), d;
  std::vector<int> v;
  std::vector<double> z;
  const int a0 = (axis == 0) ? 1 : 0;
  const int a1 = (axis == 2) ? 1 : 2;
  const int n0 = geom.dim > a0 ? geom.shape[a0] : 1;
  const int n1 = geom.dim > a1 ? geom.shape[a1] : 1;
  for (int i0 = 0; i0 < n0; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      idx[a0] = i0;
      idx[a1] = i1;
      for (int q = 0; q < n; ++q) {
        idx[axis] = q;
        f[q] = g[geom.index(idx)];
      }
      dt1d_squared(f, d, v, z);
      for (int q = 0; q < n; ++q) {
        idx[axis] = q;
        g[geom.index(idx)] = d[q];
      }
    }
  }
}

// Two-pass chamfer relaxation, exact for l1 (axis moves, cost 1) and linf
// (all moves, cost 1 = chessboard) on an integer lattice.
inline void chamfer(std::vector<double>& g, const GridGeom& geom, bool diagonal_moves) {
  // gather causal neighbor offsets (negative lexicographic side)
  std::vector<std::array<int, 3>> offs;
  const int zlo = geom.dim > 2 ? -1 : 0, zhi = geom.dim > 2 ? 1 : 0;
  const int ylo = geom.dim > 1 ? -1 : 0, yhi = geom.dim > 1 ? 1 : 0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = ylo; dy <= yhi; ++dy)
      for (int dz = zlo; dz <= zhi; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        int nz = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (!diagonal_moves && nz != 1) continue;
        // causal = strictly earlier in row-major order
        if (dx < 0 || (dx == 0 && (dy < 0 || (dy == 0 && dz < 0)))) offs.push_back({dx, dy, dz});
      }

  auto sweep = [&](bool forward) {
    const int total = static_cast<int>(geom.cell_count());
    for (int t = 0; t < total; ++t) {
      int flat = forward ? t : total - 1 - t;
      auto idx = geom.unindex(static_cast<size_t>(flat));
      double best = g[static_cast<size_t>(flat)];
      for (const auto& o : offs) {
        std::array<int, 3> nb{idx[0] + (forward ? o[0] : -o[0]), idx[1] + (forward ? o[1] : -o[1]),
                              idx[2] + (forward ? o[2] : -o[2])};
        if (!geom.in_bounds(nb)) continue;
        best = std::min(best, g[geom.index(nb)] + 1.0);
      }
      g[static_cast<size_t>(flat)] = best;
    }
  };
  sweep(true);
  sweep(false);
}

}  // namespace detail

// Exact distance from every cell center to the nearest positive cell center
// under the cost norm, in world units. All-negative grids come back with
// +infinity everywhere.
inline DistanceField distance_field(const LabelGrid& grid, const CostModel& cost) {
  if (grid.labels.empty()) throw std::invalid_argument("distance_field: empty grid");
  const GridGeom& geom = grid.geom;
  std::vector<double> g(grid.labels.size());
  for (size_t i = 0; i < g.size(); ++i) g[i] = grid.labels[i] ? 0.0 : detail::kDtInf;

  if (cost.norm == Norm::L2) {
    for (int axis = 0; axis < geom.dim; ++axis) detail::dt_axis_squared(g, geom, axis);
  } else {
    detail::chamfer(g, geom, /*diagonal_moves=*/cost.norm == Norm::LInf);
  }

  DistanceField df;
  df.geom = geom;
  df.dist.resize(g.size());
  const double inf = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i] >= detail::kDtInf) {
      df.dist[i] = inf;
    } else {
      double cells = cost.norm == Norm::L2 ? std::sqrt(g[i]) : g[i];
      df.dist[i] = cells * geom.cell_size;
    }
  }
  return df;
}

}  // namespace strategex
