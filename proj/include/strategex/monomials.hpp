#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "strategex/vec.hpp"

namespace strategex {

// Number of d-variate monomials of total degree <= k: C(k+d, d).
inline size_t monomial_count(int degree, int dim) {
  if (degree < 0 || dim < 1) throw std::invalid_argument("bad monomial basis parameters");
  size_t n = 1, q = 1;
  for (int i = 1; i <= dim; ++i) {
    n *= static_cast<size_t>(degree + i);
    q *= static_cast<size_t>(i);
  }
  return n / q;
}

// Exponent tuples of the graded-lexicographic basis: total degree ascending,
// and within a degree lexicographically descending on (e0, e1, e2) — so for
// d=2, k=2 the order is [1, x, y, x^2, x*y, y^2]. Coefficient vectors are
// stored in exactly this order everywhere.
inline std::vector<std::array<int, 3>> monomial_exponents(int degree, int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("monomial basis supports 1 <= d <= 3");
  std::vector<std::array<int, 3>> out;
  out.reserve(monomial_count(degree, dim));
  for (int total = 0; total <= degree; ++total) {
    if (dim == 1) {
      out.push_back({total, 0, 0});
      continue;
    }
    for (int e0 = total; e0 >= 0; --e0) {
      if (dim == 2) {
        out.push_back({e0, total - e0, 0});
        continue;
      }
      for (int e1 = total - e0; e1 >= 0; --e1) out.push_back({e0, e1, total - e0 - e1});
    }
  }
  return out;
}

inline double eval_monomial(const std::array<int, 3>& e, const Vec& x) {
  double r = 1.0;
  for (int i = 0; i < x.dim; ++i)
    for (int p = 0; p < e[i]; ++p) r *= x[i];
  return r;
}

}  // namespace strategex
