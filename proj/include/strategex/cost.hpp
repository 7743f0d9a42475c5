#pragma once

#include <stdexcept>
#include <string>

#include "strategex/vec.hpp"

namespace strategex {

enum class Norm { L1, L2, LInf };

inline std::string norm_name(Norm n) {
  switch (n) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::LInf: return "linf";
  }
  return "?";
}

inline Norm norm_from_name(const std::string& s) {
  if (s == "l1") return Norm::L1;
  if (s == "l2") return Norm::L2;
  if (s == "linf") return Norm::LInf;
  throw std::invalid_argument("unknown norm '" + s + "' (expected l1|l2|linf)");
}

// Movement cost c(x,x') = ||x - x'|| under the chosen norm, with budget
// alpha. alpha = 0 is allowed and degenerates to standard (no-move)
// prediction; every positive alpha gives the usual ball B_alpha.
struct CostModel {
  Norm norm = Norm::L2;
  double alpha = 1.0;

  CostModel() = default;
  CostModel(Norm n, double a) : norm(n), alpha(a) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  }

  double cost(const Vec& a, const Vec& b) const {
    Vec d = a - b;
    switch (norm) {
      case Norm::L1: return norm_l1(d);
      case Norm::L2: return norm_l2(d);
      case Norm::LInf: return norm_linf(d);
    }
    return 0.0;
  }

  double length(const Vec& d) const {
    switch (norm) {
      case Norm::L1: return norm_l1(d);
      case Norm::L2: return norm_l2(d);
      case Norm::LInf: return norm_linf(d);
    }
    return 0.0;
  }

  // Dual norm of a weight vector: the tight offset for the linear closed
  // form is alpha * ||w||_dual (max of w.x over the unit cost ball).
  double dual_norm(const Vec& w) const {
    switch (norm) {
      case Norm::L1: return norm_linf(w);
      case Norm::L2: return norm_l2(w);
      case Norm::LInf: return norm_l1(w);
    }
    return 0.0;
  }
};

}  // namespace strategex
