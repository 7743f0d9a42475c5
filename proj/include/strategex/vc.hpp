#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/distance_transform.hpp"
#include "strategex/grid.hpp"
#include "strategex/monomials.hpp"
#include "strategex/response.hpp"
#include "strategex/rng.hpp"
#include "strategex/vec.hpp"

namespace strategex {

// Shattering experiments on finite classifier families: how gaming changes
// what a family can express. Everything is brute force over declared finite
// universes — label patterns are enumerated, never argued — so a reported
// bound doubles as an audit record.

struct FiniteClass {
  std::string name;  // fixture name with its parameters spelled out
  std::vector<Classifier> classifiers;
};

struct ShatterResult {
  bool shattered = false;
  // First label pattern no classifier realizes, counting patterns as binary
  // integers with bit i = desired label of points[i]. Empty when shattered.
  std::optional<std::vector<int>> missing_pattern;
};

// Outcome of the scale-up argument: blowing a shattered configuration up by
// (alpha+1)/c_neg prices every witness move above the whole budget, so the
// scaled set keeps its standard labels after gaming.
struct ScalingReport {
  double c_neg = std::numeric_limits<double>::infinity();  // cheapest escape
  double scale = 0.0;          // (alpha + 1) / c_neg
  int pairs_checked = 0;       // (classifier, point) pairs at the scaled layout
  bool preserved = false;      // effective == standard on every scaled pair
  std::string first_violation; // empty when preserved
};

namespace detail {

inline void check_class(const FiniteClass& H) {
  if (H.classifiers.empty()) throw std::invalid_argument("finite class needs classifiers");
  for (const Classifier& h : H.classifiers)
    if (h.dimension != H.classifiers[0].dimension)
      throw std::invalid_argument("finite class mixes dimensions");
}

inline uint32_t label_mask(const Classifier& h, const std::vector<Vec>& pts, bool effective,
                           const CostModel& cost, double resolution) {
  uint32_t mask = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    int lab = effective ? effective_label(h, pts[i], cost, resolution) : predict(h, pts[i]);
    if (lab) mask |= uint32_t(1) << i;
  }
  return mask;
}

}  // namespace detail

// Does the family (or its after-gaming version) realize every one of the 2^n
// label patterns on `points`?
inline ShatterResult shatters(const FiniteClass& H, const std::vector<Vec>& points,
                              bool effective, const CostModel& cost, double resolution) {
  detail::check_class(H);
  if (points.size() > 12)
    throw std::invalid_argument("shattering check capped at 12 points");
  ShatterResult result;
  if (points.empty()) {  // nothing to label, nothing to miss
    result.shattered = true;
    return result;
  }
  std::unordered_set<uint32_t> seen;
  for (const Classifier& h : H.classifiers)
    seen.insert(detail::label_mask(h, points, effective, cost, resolution));
  const uint32_t patterns = uint32_t(1) << points.size();
  for (uint32_t pat = 0; pat < patterns; ++pat) {
    if (seen.count(pat)) continue;
    std::vector<int> bits(points.size());
    for (size_t i = 0; i < points.size(); ++i) bits[i] = static_cast<int>((pat >> i) & 1u);
    result.missing_pattern = std::move(bits);
    return result;
  }
  result.shattered = true;
  return result;
}

// Size of the largest shattered candidate set: a lower bound on the VC
// dimension, exact when the candidates exhaust a declared universe.
inline int vc_lower_bound(const FiniteClass& H, const std::vector<std::vector<Vec>>& candidate_sets,
                          bool effective, const CostModel& cost, double resolution) {
  detail::check_class(H);
  int best = 0;
  for (const std::vector<Vec>& set : candidate_sets) {
    if (set.size() > 12)
      throw std::invalid_argument("shattering check capped at 12 points");
    if (static_cast<int>(set.size()) <= best) continue;
    // A family realizes at most |H| patterns, so 2^n > |H| can never shatter.
    if (set.size() < 31 && H.classifiers.size() < (size_t(1) << set.size())) continue;
    if (shatters(H, set, effective, cost, resolution).shattered)
      best = static_cast<int>(set.size());
  }
  return best;
}

namespace detail {

// g(x) = h(x / a): the same decision regions inflated by a.
inline Classifier scale_classifier(const Classifier& h, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("scale factor must be positive");
  if (const Linear* lin = std::get_if<Linear>(&h.variant))
    return Classifier::linear(lin->w, a * lin->b);
  if (const Polynomial* poly = std::get_if<Polynomial>(&h.variant)) {
    std::vector<std::array<int, 3>> exps = monomial_exponents(poly->degree, h.dimension);
    std::vector<double> coeffs = poly->coeffs;
    for (size_t i = 0; i < coeffs.size(); ++i)
      coeffs[i] /= std::pow(a, exps[i][0] + exps[i][1] + exps[i][2]);
    return Classifier::polynomial(h.dimension, poly->degree, std::move(coeffs));
  }
  if (const BallUnion* bu = std::get_if<BallUnion>(&h.variant)) {
    std::vector<Vec> centers = bu->centers;
    std::vector<double> radii = bu->radii;
    for (Vec& c : centers) c *= a;
    for (double& r : radii) r *= a;
    return Classifier::ball_union(std::move(centers), std::move(radii), bu->polarity);
  }
  if (const Polytope* pt = std::get_if<Polytope>(&h.variant)) {
    std::vector<Vec> vertices = pt->vertices;
    for (Vec& v : vertices) v *= a;
    return Classifier::polytope(std::move(vertices), pt->polarity);
  }
  if (const GridSampled* gs = std::get_if<GridSampled>(&h.variant)) {
    LabelGrid grid = gs->grid;
    grid.geom.origin *= a;
    grid.geom.cell_size *= a;
    return Classifier::grid_sampled(std::move(grid));
  }
  const ScoreFn& sf = std::get<ScoreFn>(h.variant);
  std::function<double(const Vec&)> f = sf.f;
  return Classifier::score_fn(h.dimension, [f, a](const Vec& x) { return f(x * (1.0 / a)); });
}

inline bool nearly(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool nearly_vec(const Vec& a, const Vec& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i)
    if (!nearly(a[i], b[i])) return false;
  return true;
}

// Structural identity up to representation: linear and polynomial scores are
// compared up to a positive factor, ball unions and polytopes up to vertex
// order. Opaque score functions never match.
inline bool same_classifier(const Classifier& p, const Classifier& q) {
  if (p.dimension != q.dimension || p.variant.index() != q.variant.index()) return false;
  if (const Linear* lp = std::get_if<Linear>(&p.variant)) {
    const Linear& lq = std::get<Linear>(q.variant);
    double np = norm_l2(lp->w), nq = norm_l2(lq.w);
    if (!nearly_vec(lp->w * (1.0 / np), lq.w * (1.0 / nq))) return false;
    return nearly(lp->b / np, lq.b / nq);
  }
  if (const Polynomial* pp = std::get_if<Polynomial>(&p.variant)) {
    const Polynomial& pq = std::get<Polynomial>(q.variant);
    if (pp->degree != pq.degree || pp->coeffs.size() != pq.coeffs.size()) return false;
    size_t pivot = 0;
    for (size_t i = 1; i < pp->coeffs.size(); ++i)
      if (std::abs(pp->coeffs[i]) > std::abs(pp->coeffs[pivot])) pivot = i;
    if (pp->coeffs[pivot] == 0.0) return pq.coeffs == pp->coeffs;
    double factor = pq.coeffs[pivot] / pp->coeffs[pivot];
    if (!(factor > 0.0)) return false;
    for (size_t i = 0; i < pp->coeffs.size(); ++i)
      if (!nearly(factor * pp->coeffs[i], pq.coeffs[i])) return false;
    return true;
  }
  if (const BallUnion* bp = std::get_if<BallUnion>(&p.variant)) {
    const BallUnion& bq = std::get<BallUnion>(q.variant);
    if (bp->polarity != bq.polarity || bp->centers.size() != bq.centers.size()) return false;
    auto sorted_balls = [](const BallUnion& b) {
      std::vector<std::pair<Vec, double>> balls;
      for (size_t i = 0; i < b.centers.size(); ++i) balls.emplace_back(b.centers[i], b.radii[i]);
      std::sort(balls.begin(), balls.end(), [](const auto& x, const auto& y) {
        if (lex_less(x.first, y.first)) return true;
        if (lex_less(y.first, x.first)) return false;
        return x.second < y.second;
      });
      return balls;
    };
    std::vector<std::pair<Vec, double>> sp = sorted_balls(*bp), sq = sorted_balls(bq);
    for (size_t i = 0; i < sp.size(); ++i)
      if (!nearly_vec(sp[i].first, sq[i].first) || !nearly(sp[i].second, sq[i].second))
        return false;
    return true;
  }
  if (const Polytope* tp = std::get_if<Polytope>(&p.variant)) {
    const Polytope& tq = std::get<Polytope>(q.variant);
    if (tp->polarity != tq.polarity || tp->vertices.size() != tq.vertices.size()) return false;
    std::vector<Vec> vp = tp->vertices, vq = tq.vertices;
    auto by_lex = [](const Vec& a, const Vec& b) { return lex_less(a, b); };
    std::sort(vp.begin(), vp.end(), by_lex);
    std::sort(vq.begin(), vq.end(), by_lex);
    for (size_t i = 0; i < vp.size(); ++i)
      if (!nearly_vec(vp[i], vq[i])) return false;
    return true;
  }
  if (const GridSampled* gp = std::get_if<GridSampled>(&p.variant)) {
    const GridSampled& gq = std::get<GridSampled>(q.variant);
    return gp->grid.geom.dim == gq.grid.geom.dim && gp->grid.geom.shape == gq.grid.geom.shape &&
           nearly(gp->grid.geom.cell_size, gq.grid.geom.cell_size) &&
           nearly_vec(gp->grid.geom.origin, gq.grid.geom.origin) &&
           gp->grid.labels == gq.grid.labels;
  }
  return false;
}

// Cheapest move that flips a negatively classified point positive. Mirrors
// the exact cases of effective_label but reports the cost itself; anything
// without a closed form reads a distance field rastered around the point.
inline double escape_cost(const Classifier& h, const Vec& x, const CostModel& cost,
                          double resolution) {
  if (predict(h, x) == 1) return 0.0;
  if (const Linear* lin = std::get_if<Linear>(&h.variant))
    return (lin->b - dot(lin->w, x)) / cost.dual_norm(lin->w);
  if (cost.norm == Norm::L2) {
    if (const BallUnion* bu = std::get_if<BallUnion>(&h.variant)) {
      if (bu->polarity == Polarity::PositiveInside) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < bu->centers.size(); ++i)
          best = std::min(best, norm_l2(x - bu->centers[i]) - bu->radii[i]);
        return best;
      }
      bool disjoint = true;
      for (size_t i = 0; i < bu->centers.size() && disjoint; ++i)
        for (size_t j = i + 1; j < bu->centers.size() && disjoint; ++j)
          if (norm_l2(bu->centers[i] - bu->centers[j]) <= bu->radii[i] + bu->radii[j])
            disjoint = false;
      if (disjoint) {
        // x is negative, hence strictly inside some ball; straight out of it
        // is the nearest positively classified point.
        for (size_t i = 0; i < bu->centers.size(); ++i) {
          double depth = bu->radii[i] - norm_l2(x - bu->centers[i]);
          if (depth > 0.0) return depth;
        }
      }
    }
    if (const Polytope* pt = std::get_if<Polytope>(&h.variant)) {
      if (h.dimension == 2) return distance_to_polygon_boundary(pt->vertices, x);
    }
  }
  if (const GridSampled* gs = std::get_if<GridSampled>(&h.variant)) {
    const LabelGrid& g = gs->grid;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < g.labels.size(); ++i)
      if (g.labels[i]) best = std::min(best, cost.cost(g.geom.center(i), x));
    return best;
  }
  // Probe box spans well past the budget so the scale-up threshold alpha+1
  // stays visible to the raster.
  double span = 2.0 * (cost.alpha + 1.0);
  Vec lo = x, hi = x;
  for (int axis = 0; axis < x.dim; ++axis) {
    lo[axis] -= span;
    hi[axis] += span;
  }
  GridGeom geom = GridGeom::covering(Box::of(lo, hi), resolution);
  DistanceField field = distance_field(rasterize(h, geom), cost);
  return field.at_point(x);
}

}  // namespace detail

// Check the blow-up argument on a concrete shattered configuration: compute
// c_neg, the cheapest cost at which any negatively classified witness could
// reach positivity, then rescale everything by (alpha+1)/c_neg and verify no
// label changes after gaming. scale_grid lists extra factors at which the
// family must be closed (each scaled classifier a structural member).
inline ScalingReport scaling_closure_check(const FiniteClass& H, const std::vector<Vec>& points,
                                           const CostModel& cost, double resolution,
                                           const std::vector<double>& scale_grid) {
  detail::check_class(H);
  if (points.empty()) throw std::invalid_argument("scaling check needs witness points");
  for (const Vec& p : points)
    if (p.dim != H.classifiers[0].dimension)
      throw std::invalid_argument("point/classifier dimension mismatch");

  for (double a : scale_grid)
    for (const Classifier& h : H.classifiers) {
      Classifier scaled = detail::scale_classifier(h, a);
      bool member = false;
      for (const Classifier& g : H.classifiers)
        if (detail::same_classifier(scaled, g)) {
          member = true;
          break;
        }
      if (!member) {
        std::ostringstream msg;
        msg << "scaled classifiers not in " << H.name << " (factor " << a << ")";
        throw std::invalid_argument(msg.str());
      }
    }

  ScalingReport report;
  for (const Classifier& h : H.classifiers)
    for (const Vec& x : points)
      if (predict(h, x) == 0)
        report.c_neg = std::min(report.c_neg, detail::escape_cost(h, x, cost, resolution));
  if (!std::isfinite(report.c_neg))
    throw std::invalid_argument("no negatively classified witness to scale against");
  if (!(report.c_neg > 0.0))
    throw std::runtime_error("witness escape cost vanished; configuration is degenerate");

  report.scale = (cost.alpha + 1.0) / report.c_neg;
  report.preserved = true;
  for (const Classifier& h : H.classifiers) {
    Classifier hs = detail::scale_classifier(h, report.scale);
    for (const Vec& x : points) {
      Vec xs = x * report.scale;
      int standard = predict(hs, xs);
      int effective = effective_label(hs, xs, cost, resolution);
      ++report.pairs_checked;
      if (effective != standard && report.preserved) {
        report.preserved = false;
        std::ostringstream msg;
        msg << "label flips after gaming at scaled point (" << xs[0];
        for (int axis = 1; axis < xs.dim; ++axis) msg << ", " << xs[axis];
        msg << ")";
        report.first_violation = msg.str();
      }
    }
  }
  return report;
}

// Tunable knobs for the named shattering fixtures; each builder reads only
// the fields that concern it and records the values it used in the name.
struct FixtureParams {
  double alpha = 0.75;   // movement budget the fixture is tuned for
  double delta = 0.05;   // lattice shift (four-balls) or wipeout slack
  double radius = 0.25;  // ball radius where applicable
  int lattice = 3;       // wipeout lattice side length
  double spacing = 1.8;  // wipeout lattice pitch
  double scale = 3.0;    // blow-up factor for scaled-lattice-balls
  int vertices = 3;      // negative-polytopes: vertex count
  double bound = 2.0;    // negative-polytopes: vertices drawn in this radius
  int samples = 8;       // negative-polytopes: number of classifiers
  uint64_t seed = 20260819;
};

namespace detail {

inline FiniteClass lattice_ball_fixture(const FixtureParams& p, double factor,
                                        const std::string& label) {
  // One-hot lattice corners plus a point nudged into the negative orthant:
  // four disjoint balls whose budget-grown versions overlap enough to label
  // the corners in every combination.
  std::vector<Vec> centers = {Vec(1.0, 0.0), Vec(0.0, 1.0), Vec(1.0, 1.0),
                              Vec(-p.delta, -p.delta)};
  for (Vec& c : centers) c *= factor;
  double radius = p.radius * factor;
  for (size_t i = 0; i < centers.size(); ++i)
    for (size_t j = i + 1; j < centers.size(); ++j) {
      double gap = norm_l2(centers[i] - centers[j]);
      if (gap <= 2.0 * radius)
        throw std::invalid_argument("fixture balls overlap; shrink radius or delta");
      if (gap >= 2.0 * (radius + p.alpha * factor))
        throw std::invalid_argument("fixture balls too far apart for the budget");
    }
  FiniteClass fam;
  std::ostringstream name;
  name << label << "(radius=" << radius << ", delta=" << p.delta << ", alpha=" << p.alpha;
  if (factor != 1.0) name << ", scale=" << factor;
  name << ")";
  fam.name = name.str();
  for (const Vec& c : centers)
    fam.classifiers.push_back(Classifier::ball_union({c}, {radius}, Polarity::PositiveInside));
  return fam;
}

}  // namespace detail

// Named constructions used by the shattering demos. Parameters are recorded
// in the returned name so downstream reports stay auditable.
inline FiniteClass build_fixture(const std::string& name, const FixtureParams& p = {}) {
  if (name == "four-balls") return detail::lattice_ball_fixture(p, 1.0, name);
  if (name == "scaled-lattice-balls") return detail::lattice_ball_fixture(p, p.scale, name);

  if (name == "wipeout-lattice") {
    if (p.lattice < 1 || p.lattice * p.lattice > 12)
      throw std::invalid_argument("wipeout lattice side capped at 3 (2^(m*m) classifiers)");
    double radius = p.alpha - p.delta;
    if (!(radius > 0.0)) throw std::invalid_argument("wipeout radius alpha-delta must be positive");
    if (p.spacing <= 2.0 * radius)
      throw std::invalid_argument("wipeout lattice pitch must keep the balls disjoint");
    std::vector<Vec> lattice;
    double shift = (p.lattice - 1) / 2.0;
    for (int i = 0; i < p.lattice; ++i)
      for (int j = 0; j < p.lattice; ++j)
        lattice.emplace_back((i - shift) * p.spacing, (j - shift) * p.spacing);
    FiniteClass fam;
    std::ostringstream label;
    label << "wipeout-lattice(m=" << p.lattice << ", spacing=" << p.spacing
          << ", radius=" << radius << ", alpha=" << p.alpha << ")";
    fam.name = label.str();
    const uint32_t subsets = uint32_t(1) << lattice.size();
    for (uint32_t mask = 0; mask < subsets; ++mask) {
      if (mask == 0) {
        // No negative region at all; ball unions need at least one ball, so a
        // constant positive score stands in for the empty subset.
        fam.classifiers.push_back(Classifier::score_fn(2, [](const Vec&) { return 1.0; }));
        continue;
      }
      std::vector<Vec> centers;
      std::vector<double> radii;
      for (size_t k = 0; k < lattice.size(); ++k)
        if (mask & (uint32_t(1) << k)) {
          centers.push_back(lattice[k]);
          radii.push_back(radius);
        }
      fam.classifiers.push_back(
          Classifier::ball_union(std::move(centers), std::move(radii), Polarity::NegativeInside));
    }
    return fam;
  }

  if (name == "negative-polytopes") {
    if (p.vertices < 3) throw std::invalid_argument("polytope fixture needs at least 3 vertices");
    if (p.samples < 1) throw std::invalid_argument("polytope fixture needs at least 1 sample");
    FiniteClass fam;
    std::ostringstream label;
    label << "negative-polytopes(k=" << p.vertices << ", s=" << p.bound
          << ", samples=" << p.samples << ")";
    fam.name = label.str();
    for (int s = 0; s < p.samples; ++s) {
      Rng rng = Rng::derive(p.seed, {91, static_cast<uint64_t>(s)});
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Vec> verts;
        while (static_cast<int>(verts.size()) < p.vertices) {
          double vx = rng.uniform(-p.bound, p.bound);
          double vy = rng.uniform(-p.bound, p.bound);
          Vec v(vx, vy);
          if (norm_l2(v) <= p.bound) verts.push_back(v);
        }
        try {
          fam.classifiers.push_back(Classifier::polytope(verts, Polarity::NegativeInside));
          break;
        } catch (const std::invalid_argument&) {
          continue;  // degenerate draw (collinear hull); try again
        }
      }
    }
    if (static_cast<int>(fam.classifiers.size()) != p.samples)
      throw std::runtime_error("polytope sampling failed to produce the requested classifiers");
    return fam;
  }

  throw std::invalid_argument("unknown fixture name: " + name);
}

}  // namespace strategex
