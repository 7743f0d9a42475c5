#pragma once

// Standalone SVG figures from label grids: the 0/1 boundary of each grid is
// traced as polyline contours (marching squares over cell centers) and drawn
// as plain <path> elements, so downstream figure tooling can restyle or
// extract the curves without touching raster data.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "strategex/dataset.hpp"
#include "strategex/grid.hpp"
#include "strategex/serialize.hpp"

namespace strategex {

namespace detail {

// Key for exact endpoint matching: contour vertices live on half-cell
// offsets, so doubling the (fractional) grid coordinates gives integers.
inline std::pair<int64_t, int64_t> contour_key(double gx, double gy) {
  return {static_cast<int64_t>(std::llround(2.0 * gx)), static_cast<int64_t>(std::llround(2.0 * gy))};
}

}  // namespace detail

// A contour polyline in world coordinates. Closed loops repeat their first
// point at the end.
using Contour = std::vector<Vec>;

// Traces the label transitions of a 2-d grid as contour polylines. Segments
// are found per 2x2 block of neighboring cell centers and stitched into
// chains; crossings are placed at edge midpoints (labels are binary, so
// there is no gradient to interpolate).
inline std::vector<Contour> trace_contours(const LabelGrid& g) {
  if (g.geom.dim != 2) throw std::invalid_argument("trace_contours supports d=2 only");
  const int nx = g.geom.shape[0];
  const int ny = g.geom.shape[1];

  // Collect segments in grid coordinates (unit = one cell, origin at the
  // center of cell (0,0)).
  using Key = std::pair<int64_t, int64_t>;
  struct Segment {
    double ax, ay, bx, by;
  };
  std::vector<Segment> segments;
  auto emit = [&](double ax, double ay, double bx, double by) {
    segments.push_back(Segment{ax, ay, bx, by});
  };

  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      // Corner labels of the block, in marching-squares bit order.
      const int c00 = g.at({i, j, 0});      // bottom-left
      const int c10 = g.at({i + 1, j, 0});  // bottom-right
      const int c11 = g.at({i + 1, j + 1, 0});
      const int c01 = g.at({i, j + 1, 0});
      const int code = c00 | (c10 << 1) | (c11 << 2) | (c01 << 3);
      if (code == 0 || code == 15) continue;

      const double x = i, y = j;
      // Edge midpoints of the block.
      const double bx = x + 0.5, by = y;        // bottom
      const double rx = x + 1.0, ry = y + 0.5;  // right
      const double tx = x + 0.5, ty = y + 1.0;  // top
      const double lx = x, ly = y + 0.5;        // left

      switch (code) {
        case 1: case 14: emit(lx, ly, bx, by); break;
        case 2: case 13: emit(bx, by, rx, ry); break;
        case 3: case 12: emit(lx, ly, rx, ry); break;
        case 4: case 11: emit(rx, ry, tx, ty); break;
        case 6: case 9: emit(bx, by, tx, ty); break;
        case 7: case 8: emit(lx, ly, tx, ty); break;
        case 5:  // saddle: bottom-left + top-right positive
          emit(lx, ly, bx, by);
          emit(rx, ry, tx, ty);
          break;
        case 10:  // saddle: bottom-right + top-left positive
          emit(bx, by, rx, ry);
          emit(lx, ly, tx, ty);
          break;
        default: break;
      }
    }

  // Stitch segments into chains. Each endpoint key maps to the segments
  // touching it; walk from degree-1 endpoints first (open chains), then
  // consume what remains as closed loops.
  std::multimap<Key, size_t> by_end;
  for (size_t s = 0; s < segments.size(); ++s) {
    by_end.emplace(detail::contour_key(segments[s].ax, segments[s].ay), s);
    by_end.emplace(detail::contour_key(segments[s].bx, segments[s].by), s);
  }
  std::vector<bool> used(segments.size(), false);

  auto take_from = [&](Key at, size_t& seg_out) -> bool {
    auto [lo, hi] = by_end.equal_range(at);
    for (auto it = lo; it != hi; ++it)
      if (!used[it->second]) {
        seg_out = it->second;
        return true;
      }
    return false;
  };

  auto walk = [&](size_t start) {
    Contour chain;
    const Segment& s0 = segments[start];
    used[start] = true;
    chain.push_back(Vec(s0.ax, s0.ay));
    chain.push_back(Vec(s0.bx, s0.by));
    Key head = detail::contour_key(s0.bx, s0.by);
    size_t next = 0;
    while (take_from(head, next)) {
      const Segment& s = segments[next];
      used[next] = true;
      Key a = detail::contour_key(s.ax, s.ay);
      double px, py;
      if (a == head) {
        px = s.bx;
        py = s.by;
      } else {
        px = s.ax;
        py = s.ay;
      }
      chain.push_back(Vec(px, py));
      head = detail::contour_key(px, py);
    }
    return chain;
  };

  // Count endpoint degrees to find open-chain tips.
  std::map<Key, int> degree;
  for (size_t s = 0; s < segments.size(); ++s) {
    ++degree[detail::contour_key(segments[s].ax, segments[s].ay)];
    ++degree[detail::contour_key(segments[s].bx, segments[s].by)];
  }

  std::vector<Contour> out;
  for (size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    Key a = detail::contour_key(segments[s].ax, segments[s].ay);
    if (degree[a] == 1) out.push_back(walk(s));
  }
  // Re-scan for chains starting at the b endpoint and for closed loops.
  for (size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    Key b = detail::contour_key(segments[s].bx, segments[s].by);
    if (degree[b] == 1) {
      // Flip so the open tip leads.
      std::swap(segments[s].ax, segments[s].bx);
      std::swap(segments[s].ay, segments[s].by);
      out.push_back(walk(s));
    }
  }
  for (size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) out.push_back(walk(s));

  // Convert to world coordinates.
  const double h = g.geom.cell_size;
  const Vec o = g.geom.origin;
  for (Contour& c : out)
    for (Vec& p : c)
      p = Vec(o.x() + (p.x() + 0.5) * h, o.y() + (p.y() + 0.5) * h);
  return out;
}

// One drawable curve family in a figure.
struct SvgLayer {
  std::string name;
  std::string color = "#000000";
  double stroke_width = 1.5;
  std::vector<Contour> contours;
  bool dashed = false;
};

struct SvgMarkers {
  std::string name;
  std::string color = "#000000";
  double radius = 2.0;
  std::vector<Vec> points;
};

namespace detail {

inline std::string svg_coord(double v) {
  // Fixed precision keeps files small; 1e-3 of a pixel is far below line width.
  char buf[32];
  int n = std::snprintf(buf, sizeof(buf), "%.3f", v);
  return std::string(buf, static_cast<size_t>(n));
}

}  // namespace detail

// Assembles a standalone SVG. World coordinates are mapped into a pixel
// viewport of the given width with the y axis pointing up.
inline std::string svg_document(const Box& world, const std::vector<SvgLayer>& layers,
                                const std::vector<SvgMarkers>& markers = {}, int width_px = 640) {
  if (world.dim() != 2) throw std::invalid_argument("svg_document draws 2-d boxes only");
  const double wx = world.hi.x() - world.lo.x();
  const double wy = world.hi.y() - world.lo.y();
  if (!(wx > 0.0) || !(wy > 0.0)) throw std::invalid_argument("svg_document: degenerate world box");
  const double scale = width_px / wx;
  const int height_px = static_cast<int>(std::lround(wy * scale));

  auto px = [&](const Vec& p) {
    return std::make_pair((p.x() - world.lo.x()) * scale, (world.hi.y() - p.y()) * scale);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_px) +
         "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"0 0 " +
         std::to_string(width_px) + " " + std::to_string(height_px) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const SvgLayer& layer : layers) {
    out += "  <g fill=\"none\" stroke=\"" + layer.color + "\" stroke-width=\"" +
           detail::svg_coord(layer.stroke_width) + "\"";
    if (layer.dashed) out += " stroke-dasharray=\"6 4\"";
    if (!layer.name.empty()) out += " data-name=\"" + layer.name + "\"";
    out += ">\n";
    for (const Contour& c : layer.contours) {
      if (c.size() < 2) continue;
      std::string d = "M ";
      for (size_t i = 0; i < c.size(); ++i) {
        auto [x, y] = px(c[i]);
        if (i > 0) d += " L ";
        d += detail::svg_coord(x) + " " + detail::svg_coord(y);
      }
      out += "    <path d=\"" + d + "\"/>\n";
    }
    out += "  </g>\n";
  }
  for (const SvgMarkers& m : markers) {
    out += "  <g fill=\"" + m.color + "\" stroke=\"none\"";
    if (!m.name.empty()) out += " data-name=\"" + m.name + "\"";
    out += ">\n";
    for (const Vec& p : m.points) {
      auto [x, y] = px(p);
      out += "    <circle cx=\"" + detail::svg_coord(x) + "\" cy=\"" + detail::svg_coord(y) +
             "\" r=\"" + detail::svg_coord(m.radius) + "\"/>\n";
    }
    out += "  </g>\n";
  }
  out += "</svg>\n";
  return out;
}

// The standard two-layer figure: the classifier's own boundary next to the
// boundary after everyone within budget has moved.
inline std::string boundary_overlay_svg(const LabelGrid& source, const LabelGrid& effective,
                                        int width_px = 640) {
  if (source.geom.dim != 2) throw std::invalid_argument("boundary_overlay_svg supports d=2 only");
  SvgLayer src;
  src.name = "source_boundary";
  src.color = "#1f77b4";
  src.dashed = true;
  src.contours = trace_contours(source);
  SvgLayer eff;
  eff.name = "effective_boundary";
  eff.color = "#d62728";
  eff.contours = trace_contours(effective);
  Box world = Box::of(source.geom.origin,
                      Vec(source.geom.origin.x() + source.geom.shape[0] * source.geom.cell_size,
                          source.geom.origin.y() + source.geom.shape[1] * source.geom.cell_size));
  return svg_document(world, {src, eff});
}

}  // namespace strategex
