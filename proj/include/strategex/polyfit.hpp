#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "strategex/monomials.hpp"
#include "strategex/vec.hpp"

namespace strategex {

// Ridge-regularized least squares on monomial features. The fit happens in
// coordinates shrunk by `scale` so high-degree features stay conditioned
// (x^6 over a ±100 box would swing through 1e12 otherwise); the returned
// coefficients are mapped back to the original frame.
inline std::vector<double> fit_polynomial(const std::vector<Vec>& pts,
                                          const std::vector<double>& targets, int degree,
                                          double scale, double ridge = 1e-8) {
  if (pts.empty() || pts.size() != targets.size())
    throw std::invalid_argument("polynomial fit needs matching nonempty points and targets");
  if (degree < 0) throw std::invalid_argument("polynomial fit needs a nonnegative degree");
  if (!(scale > 0.0)) throw std::invalid_argument("coordinate scale must be positive");

  const int dim = pts[0].dim;
  const std::vector<std::array<int, 3>> exps = monomial_exponents(degree, dim);
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index m = static_cast<Eigen::Index>(exps.size());
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec x = pts[static_cast<size_t>(i)] * (1.0 / scale);
    for (Eigen::Index j = 0; j < m; ++j)
      A(i, j) = eval_monomial(exps[static_cast<size_t>(j)], x);
    y(i) = targets[static_cast<size_t>(i)];
  }
  Eigen::MatrixXd gram = A.transpose() * A;
  gram.diagonal().array() += ridge;
  Eigen::VectorXd c = gram.ldlt().solve(A.transpose() * y);

  std::vector<double> coeffs(exps.size());
  for (size_t j = 0; j < exps.size(); ++j) {
    int total = exps[j][0] + exps[j][1] + exps[j][2];
    coeffs[j] = c(static_cast<Eigen::Index>(j)) / std::pow(scale, total);
  }
  return coeffs;
}

inline double eval_polynomial(const std::vector<double>& coeffs,
                              const std::vector<std::array<int, 3>>& exps, const Vec& x) {
  double score = 0.0;
  for (size_t j = 0; j < coeffs.size(); ++j) score += coeffs[j] * eval_monomial(exps[j], x);
  return score;
}

// Fraction of points whose fitted sign matches the target sign; score >= 0
// counts as positive, matching the prediction convention.
inline double sign_agreement(const std::vector<double>& coeffs, int degree,
                             const std::vector<Vec>& pts, const std::vector<double>& targets) {
  if (pts.empty() || pts.size() != targets.size())
    throw std::invalid_argument("sign agreement needs matching nonempty points and targets");
  const std::vector<std::array<int, 3>> exps = monomial_exponents(degree, pts[0].dim);
  if (exps.size() != coeffs.size())
    throw std::invalid_argument("coefficient count does not match the requested degree");
  size_t hits = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    if ((eval_polynomial(coeffs, exps, pts[i]) >= 0.0) == (targets[i] > 0.0)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pts.size());
}

}  // namespace strategex
