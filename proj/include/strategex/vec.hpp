#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace strategex {

// Small fixed-capacity point type. The engine works in d <= 3 (grids are
// capped at 3 axes anyway), so a dynamic vector would only buy allocations.
struct Vec {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  int dim = 0;

  Vec() = default;
  explicit Vec(double x) : v{x, 0.0, 0.0}, dim(1) {}
  Vec(double x, double y) : v{x, y, 0.0}, dim(2) {}
  Vec(double x, double y, double z) : v{x, y, z}, dim(3) {}

  static Vec zero(int d) {
    Vec p;
    p.dim = d;
    return p;
  }

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  double x() const { return v[0]; }
  double y() const { return v[1]; }
  double z() const { return v[2]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim; ++i) v[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a.v[i] != b.v[i]) return false;
    return true;
  }

  // Lexicographic order, used for deterministic tie-breaking.
  friend bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.dim; ++i) {
      if (a.v[i] < b.v[i]) return true;
      if (a.v[i] > b.v[i]) return false;
    }
    return false;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.v[i] * b.v[i];
  return s;
}

inline double norm_l2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_l1(const Vec& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += std::abs(a.v[i]);
  return s;
}

inline double norm_linf(const Vec& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s = std::max(s, std::abs(a.v[i]));
  return s;
}

inline Vec normalized(const Vec& a) {
  double n = norm_l2(a);
  if (n == 0.0) throw std::domain_error("cannot normalize a zero vector");
  return a * (1.0 / n);
}

}  // namespace strategex
