#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strategex/rng.hpp"
#include "strategex/vec.hpp"

namespace strategex {

struct Dataset {
  std::vector<Vec> points;
  std::vector<uint8_t> labels;
  int dim = 2;

  size_t size() const { return points.size(); }

  void push(const Vec& p, int label) {
    points.push_back(p);
    labels.push_back(static_cast<uint8_t>(label));
  }

  size_t count_label(int y) const {
    size_t n = 0;
    for (uint8_t l : labels) n += (l == y);
    return n;
  }

  // Accuracy of the best constant classifier.
  double majority_rate() const {
    size_t p = count_label(1);
    return static_cast<double>(std::max(p, size() - p)) / static_cast<double>(size());
  }
};

// Two isotropic unit-variance Gaussian clouds in R^2; class y is centered at
// (y*mu, y*mu), so class 0 sits at the origin and the centers are mu*sqrt(2)
// apart. Class 0 points are emitted first. Deterministic in the seed.
inline Dataset make_gaussian_dataset(double mu, int n_per_class, uint64_t seed) {
  if (n_per_class < 1) throw std::invalid_argument("n_per_class must be >= 1");
  if (mu < 0.0) throw std::invalid_argument("mu must be nonnegative");
  Dataset ds;
  ds.dim = 2;
  for (int y = 0; y <= 1; ++y) {
    Rng rng = Rng::derive(seed, {static_cast<uint64_t>(y)});
    double cx = y * mu, cy = y * mu;
    for (int i = 0; i < n_per_class; ++i) {
      double px = cx + rng.normal();
      double py = cy + rng.normal();
      ds.push(Vec(px, py), y);
    }
  }
  return ds;
}

// Integer lattice 0..m-1 on the line with alternating labels 0,1,0,1,...
inline Dataset make_lattice_dataset(int m) {
  if (m < 2) throw std::invalid_argument("lattice dataset needs m >= 2");
  Dataset ds;
  ds.dim = 1;
  for (int i = 0; i < m; ++i) ds.push(Vec(static_cast<double>(i)), i % 2);
  return ds;
}

// Vertices of a regular d-simplex with circumradius 1 around the origin.
inline std::vector<Vec> unit_simplex_vertices(int dim) {
  std::vector<Vec> vs;
  switch (dim) {
    case 1:
      vs = {Vec(-1.0), Vec(1.0)};
      break;
    case 2:
      // first vertex pointing up, then every 120 degrees
      for (int i = 0; i < 3; ++i) {
        double a = M_PI / 2.0 + i * 2.0 * M_PI / 3.0;
        vs.push_back(Vec(std::cos(a), std::sin(a)));
      }
      break;
    case 3: {
      const double s = 1.0 / std::sqrt(3.0);
      vs = {Vec(s, s, s), Vec(s, -s, -s), Vec(-s, s, -s), Vec(-s, -s, s)};
      break;
    }
    default:
      throw std::invalid_argument("simplex supported for d in {1,2,3}");
  }
  return vs;
}

// Each positive point is ringed by d+1 negative points at circumradius delta
// (a regular simplex). The circumballs of distinct rings must not touch —
// that guarantees disjoint simplices — otherwise this throws. Points are
// emitted positive-first per ring.
inline Dataset make_tetrahedron_dataset(const std::vector<Vec>& positives, double delta) {
  if (positives.empty()) throw std::invalid_argument("need at least one positive point");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  int dim = positives[0].dim;
  for (const Vec& p : positives)
    if (p.dim != dim) throw std::invalid_argument("positive points have mixed dimensions");
  for (size_t i = 0; i < positives.size(); ++i)
    for (size_t j = i + 1; j < positives.size(); ++j)
      if (norm_l2(positives[i] - positives[j]) <= 2.0 * delta)
        throw std::invalid_argument("delta too large: simplices around positives overlap");
  Dataset ds;
  ds.dim = dim;
  const auto simplex = unit_simplex_vertices(dim);
  for (const Vec& p : positives) {
    ds.push(p, 1);
    for (const Vec& v : simplex) ds.push(p + v * delta, 0);
  }
  return ds;
}

}  // namespace strategex
