#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/dataset.hpp"
#include "strategex/distance_transform.hpp"
#include "strategex/grid.hpp"
#include "strategex/response.hpp"

// Accuracy once everyone games the classifier, and exact desk-scale
// maximization of it. Gaming moves a point to the positive side whenever the
// positive region is within the movement budget, so after-gaming positive
// regions are exactly unions of budget balls. That structure is what makes
// the maximizers below enumerable: the best linear rule pins two data points,
// and the best after-gaming rule is a union of balls drawn from a finite
// candidate grid. All searches keep accuracy as an integer count over the
// dataset size, so comparisons are exact and tie-breaking is stable.

namespace strategex {

struct AccuracyResult {
  long long correct = 0;
  long long total = 0;
  double accuracy = 0.0;          // correct/total; the counts are the ground truth
  std::string optimal_structure;  // human-readable witness of the maximizer
};

namespace detail {

inline AccuracyResult make_accuracy(long long correct, long long total, std::string structure) {
  AccuracyResult r;
  r.correct = correct;
  r.total = total;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  r.optimal_structure = std::move(structure);
  return r;
}

inline std::string fmt_point(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.dim; ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace detail

// Fraction of points whose label matches the after-gaming prediction. A point
// ends up positive iff the classifier's positive region lies within the
// movement budget, measured here on a raster of the classifier padded by the
// budget so every relevant positive cell is in view. Budget zero skips the
// raster and is plain no-move evaluation.
inline AccuracyResult strategic_accuracy(const Classifier& h, const Dataset& data,
                                         const CostModel& cost, double resolution) {
  if (data.size() == 0) throw std::invalid_argument("strategic_accuracy: empty dataset");
  if (data.dim != h.dimension)
    throw std::invalid_argument("strategic_accuracy: classifier/dataset dimension mismatch");
  const long long n = static_cast<long long>(data.size());

  if (cost.alpha == 0.0) {
    long long correct = 0;
    for (size_t i = 0; i < data.size(); ++i)
      correct += predict(h, data.points[i]) == (data.labels[i] == 1);
    return detail::make_accuracy(correct, n, "no-move evaluation");
  }

  if (!(resolution > 0.0)) throw std::invalid_argument("strategic_accuracy: resolution must be positive");
  Vec lo = data.points[0], hi = data.points[0];
  for (const Vec& p : data.points)
    for (int a = 0; a < data.dim; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  // Pad by the budget plus a few cells: any positive region a point could
  // reach then rasterizes inside the box, and every point sits inside it.
  // (Padding the corners directly keeps collinear data from degenerating.)
  const double pad = cost.alpha + 3.0 * resolution;
  for (int a = 0; a < data.dim; ++a) {
    lo[a] -= pad;
    hi[a] += pad;
  }
  Box box = Box::of(lo, hi);
  DistanceField df = distance_field(rasterize(h, GridGeom::covering(box, resolution)), cost);

  long long correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    bool positive = df.at_point(data.points[i]) <= cost.alpha;
    correct += positive == (data.labels[i] == 1);
  }
  return detail::make_accuracy(correct, n, "after-gaming evaluation");
}

// Best halfplane accuracy, exactly. A maximizing halfplane can always be slid
// and then rotated until its boundary pins two data points without losing
// accuracy, so enumerating every point pair's line with both orientations
// covers some maximizer. Points that land exactly on a candidate line are not
// decided by it: an infinitesimal tilt about a pivot on the line sends the
// points on one side of the pivot positive and the rest negative, so the
// achievable patterns along the line are exactly the one-sided rays in the
// line's 1-d order. Enumerating those rays handles collinear data without
// jitter and subsumes the convention that negative anchor points count as
// correctly labeled.
inline AccuracyResult max_linear_accuracy(const Dataset& data) {
  if (data.dim != 2) throw std::invalid_argument("max_linear_accuracy: data must be 2-d");
  const int n = static_cast<int>(data.size());
  if (n < 2) throw std::invalid_argument("max_linear_accuracy: need at least 2 points");

  const long long negatives = static_cast<long long>(data.count_label(0));
  const long long positives = static_cast<long long>(n) - negatives;
  long long best = std::max(negatives, positives);
  std::string structure =
      negatives >= positives ? "constant negative" : "constant positive";

  std::vector<double> side(data.size()), along(data.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec dir = data.points[j] - data.points[i];
      if (dir[0] == 0.0 && dir[1] == 0.0) continue;  // coincident pair, no line
      Vec nrm(-dir[1], dir[0]);
      std::vector<std::pair<double, int>> on_line;  // (position along, label)
      for (int k = 0; k < n; ++k) {
        Vec rel = data.points[k] - data.points[i];
        side[k] = dot(nrm, rel);
        along[k] = dot(dir, rel);
        if (side[k] == 0.0) on_line.emplace_back(along[k], data.labels[k]);
      }
      std::sort(on_line.begin(), on_line.end());
      const int m = static_cast<int>(on_line.size());

      for (int orient = 0; orient < 2; ++orient) {
        const double sgn = orient ? -1.0 : 1.0;
        long long base = 0;
        for (int k = 0; k < n; ++k) {
          if (side[k] == 0.0) continue;
          base += (sgn * side[k] > 0.0) == (data.labels[k] == 1);
        }
        // Rays along the line: positives are a suffix (cut c .. m-1) or a
        // prefix (0 .. c-1) of the sorted on-line points.
        long long best_ray = -1;
        int best_cut = 0;
        bool best_suffix = true;
        for (int suffix = 0; suffix < 2; ++suffix) {
          for (int c = 0; c <= m; ++c) {
            long long correct = 0;
            for (int k = 0; k < m; ++k) {
              bool pos = suffix ? k >= c : k < c;
              correct += pos == (on_line[k].second == 1);
            }
            if (correct > best_ray) {
              best_ray = correct;
              best_cut = c;
              best_suffix = suffix != 0;
            }
          }
        }
        long long total = base + best_ray;
        if (total > best) {
          best = total;
          std::ostringstream os;
          os << "boundary through " << detail::fmt_point(data.points[i]) << " and "
             << detail::fmt_point(data.points[j]) << ", positive normal "
             << detail::fmt_point(sgn * nrm) << ", on-line "
             << (best_suffix ? "suffix" : "prefix") << " cut " << best_cut << "/" << m;
          structure = os.str();
        }
      }
    }
  }
  return detail::make_accuracy(best, n, structure);
}

namespace detail {

// A candidate budget ball reduced to what it covers: bit b of `neg` is the
// b-th negative point, bit b of `pos` the b-th positive point.
struct BallCoverage {
  uint64_t neg = 0;
  uint64_t pos = 0;
};

// Above this many negative points the full subset table (2^n0 entries) stops
// being a good trade and the search walks subsets in increasing size instead.
// 2^25 uint64 entries = 268 MB of scratch at the ceiling; past that the
// search walks subsets in size order instead.
inline constexpr int kSubsetTableMaxNegatives = 25;

}  // namespace detail

// Exact-within-grid maximum accuracy over all after-gaming rules. Every
// after-gaming positive region is a union of budget balls, so the search (a)
// drops candidate ball centers on a grid over the data range padded by the
// budget, (b) reduces each ball to the subset of points it covers, and (c)
// looks for the best union. Unions are organized by their allowed-mistake
// set Z of negatives: for a given Z, it is always optimal to take every
// candidate whose covered negatives fit inside Z and count the positives the
// union covers. Z's that mark more negatives than the union actually covers
// only undercount, and the exact cover set of the optimum is itself
// enumerated, so the maximum over Z is exact. Small negative classes use a
// subset-indexed table; larger ones walk Z by increasing size and stop once
// even full positive coverage cannot beat the incumbent.
inline AccuracyResult max_strategic_accuracy(const Dataset& data, const CostModel& cost,
                                             double grid_step = 0.0) {
  if (data.size() == 0) throw std::invalid_argument("max_strategic_accuracy: empty dataset");
  if (data.size() > 60)
    throw std::invalid_argument("max_strategic_accuracy: exponential search capped at 60 points");
  if (data.dim != 1 && data.dim != 2)
    throw std::invalid_argument("max_strategic_accuracy: data must be 1-d or 2-d");
  if (!(cost.alpha > 0.0))
    throw std::invalid_argument("max_strategic_accuracy: budget must be positive");
  if (grid_step == 0.0) grid_step = cost.alpha / 10.0;
  if (!(grid_step > 0.0)) throw std::invalid_argument("max_strategic_accuracy: grid step must be positive");

  std::vector<int> pos_idx, neg_idx;
  for (size_t i = 0; i < data.size(); ++i)
    (data.labels[i] == 1 ? pos_idx : neg_idx).push_back(static_cast<int>(i));
  const int n1 = static_cast<int>(pos_idx.size());
  const int n0 = static_cast<int>(neg_idx.size());
  const long long n = static_cast<long long>(data.size());

  // Candidate centers: a grid over the data range padded by the budget. A
  // ball that covers any data point has its center within the budget of that
  // point, so the padded range contains a grid neighbor of every useful
  // center.
  Vec lo = data.points[0], hi = data.points[0];
  for (const Vec& p : data.points)
    for (int a = 0; a < data.dim; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  std::array<int, 2> steps{1, 1};
  for (int a = 0; a < data.dim; ++a) {
    lo[a] -= cost.alpha;
    hi[a] += cost.alpha;
    steps[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / grid_step + 1e-9)) + 1;
  }

  // Reduce candidates to coverage masks. Balls covering the same negatives
  // are interchangeable under any Z, so their positive masks merge; a first
  // representative center per distinct coverage is kept for the report.
  std::map<uint64_t, uint64_t> merged;                              // neg -> union of pos
  std::map<std::pair<uint64_t, uint64_t>, Vec> representative;      // (neg,pos) -> center
  for (int ky = 0; ky < (data.dim == 2 ? steps[1] : 1); ++ky) {
    for (int kx = 0; kx < steps[0]; ++kx) {
      Vec c = Vec::zero(data.dim);
      c[0] = lo[0] + kx * grid_step;
      if (data.dim == 2) c[1] = lo[1] + ky * grid_step;
      uint64_t pm = 0, nm = 0;
      for (int b = 0; b < n1; ++b)
        if (cost.cost(data.points[pos_idx[b]], c) <= cost.alpha) pm |= uint64_t{1} << b;
      if (pm == 0) continue;  // covers no positives, can only hurt
      for (int b = 0; b < n0; ++b)
        if (cost.cost(data.points[neg_idx[b]], c) <= cost.alpha) nm |= uint64_t{1} << b;
      merged[nm] |= pm;
      representative.emplace(std::make_pair(nm, pm), c);
    }
  }

  // Drop candidates pairwise-dominated by one that costs no more negatives
  // and covers no fewer positives.
  std::vector<detail::BallCoverage> cands;
  cands.reserve(merged.size());
  for (const auto& [nm, pm] : merged) {
    bool dominated = false;
    for (const auto& k : cands)
      if ((k.neg & ~nm) == 0 && (pm & ~k.pos) == 0) { dominated = true; break; }
    if (!dominated) cands.push_back({nm, pm});
  }

  long long best_correct = -1;
  uint64_t best_z = 0, best_covered = 0;
  auto consider = [&](uint64_t z, uint64_t covered) {
    long long correct = std::popcount(covered) + (n0 - std::popcount(z));
    if (correct > best_correct) {
      best_correct = correct;
      best_z = z;
      best_covered = covered;
    }
  };

  if (n0 <= detail::kSubsetTableMaxNegatives) {
    // f[z] = positives covered by the union of all candidates whose negatives
    // fit inside z, built by the usual subset-sum sweep over bits.
    std::vector<uint64_t> f(uint64_t{1} << n0, 0);
    for (const auto& k : cands) f[k.neg] |= k.pos;
    for (int b = 0; b < n0; ++b)
      for (uint64_t z = 0; z < f.size(); ++z)
        if (z >> b & 1) f[z] |= f[z ^ (uint64_t{1} << b)];
    for (uint64_t z = 0; z < f.size(); ++z) consider(z, f[z]);
  } else {
    auto covered_for = [&](uint64_t z) {
      uint64_t cov = 0;
      for (const auto& k : cands)
        if ((k.neg & ~z) == 0) cov |= k.pos;
      return cov;
    };
    for (int k = 0; k <= n0; ++k) {
      // Even covering every positive cannot beat the incumbent at this size.
      if (n1 + static_cast<long long>(n0 - k) <= best_correct) break;
      if (k == 0) {
        consider(0, covered_for(0));
        continue;
      }
      uint64_t z = (uint64_t{1} << k) - 1;
      const uint64_t limit = uint64_t{1} << n0;
      while (z < limit) {
        consider(z, covered_for(z));
        uint64_t t = z | (z - 1);  // Gosper: next mask of equal popcount
        z = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(z) + 1));
      }
    }
  }

  // Reconstruct a witness: greedily pick representative centers compatible
  // with the winning Z until they cover everything the union covers.
  std::ostringstream os;
  if (best_covered == 0) {
    os << "no positive region (constant negative)";
  } else {
    os << "balls at";
    uint64_t acc = 0;
    for (const auto& [key, center] : representative) {
      if ((key.first & ~best_z) != 0) continue;
      if ((key.second & ~acc) == 0) continue;
      acc |= key.second;
      os << " " << detail::fmt_point(center);
      if (acc == best_covered) break;
    }
    os << "; allowed-mistake negatives {";
    bool first = true;
    for (int b = 0; b < n0; ++b)
      if (best_z >> b & 1) {
        os << (first ? "" : ", ") << neg_idx[b];
        first = false;
      }
    os << "}";
  }
  return detail::make_accuracy(best_correct, n, os.str());
}

// Exact 1-d maximum by dynamic programming over the sorted points. On a line
// the after-gaming positive region is a union of closed intervals, each at
// least one budget diameter long; a maximal run of positively classified
// points is feasible exactly when such an interval fits strictly between the
// run's excluded neighbors. The recursion either leaves the next point
// negative or commits a feasible run starting there (which forces the point
// after the run negative).
inline AccuracyResult max_strategic_accuracy_1d(const Dataset& data, double alpha) {
  if (data.dim != 1) throw std::invalid_argument("max_strategic_accuracy_1d: data must be 1-d");
  if (data.size() == 0) throw std::invalid_argument("max_strategic_accuracy_1d: empty dataset");
  if (!(alpha > 0.0)) throw std::invalid_argument("max_strategic_accuracy_1d: budget must be positive");
  const int n = static_cast<int>(data.size());

  std::vector<int> order(data.size());
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return data.points[a][0] < data.points[b][0]; });
  std::vector<double> x(data.size());
  std::vector<int> y(data.size());
  for (int i = 0; i < n; ++i) {
    x[i] = data.points[order[i]][0];
    y[i] = data.labels[order[i]];
  }
  for (int i = 0; i + 1 < n; ++i)
    if (x[i] == x[i + 1])
      throw std::invalid_argument("max_strategic_accuracy_1d: duplicate coordinates");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<long long> f(static_cast<size_t>(n) + 1, 0);
  std::vector<int> run_end(data.size(), -1);  // -1: point stays negative
  for (int i = n - 1; i >= 0; --i) {
    long long best = (y[i] == 0) + f[i + 1];
    for (int j = i; j < n; ++j) {
      double lo = i > 0 ? x[i - 1] : -inf;
      double hi = j + 1 < n ? x[j + 1] : inf;
      if (!(hi - lo > 2.0 * alpha)) continue;
      long long run_pos = 0;
      for (int k = i; k <= j; ++k) run_pos += y[k];
      long long val = run_pos + (j + 1 < n ? (y[j + 1] == 0) + f[j + 2] : 0);
      if (val > best) {
        best = val;
        run_end[i] = j;
      }
    }
    f[i] = best;
  }

  std::ostringstream os;
  bool any = false;
  for (int i = 0; i < n;) {
    if (run_end[i] < 0) {
      ++i;
      continue;
    }
    int j = run_end[i];
    os << (any ? ", " : "positive intervals: ") << "[" << x[i] << ", " << x[j] << "]";
    any = true;
    i = j + 2;  // the point after a run is forced negative
  }
  if (!any) os << "no positive interval (constant negative)";
  return detail::make_accuracy(f[0], n, os.str());
}

}  // namespace strategex
