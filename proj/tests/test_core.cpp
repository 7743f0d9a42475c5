#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <stdexcept>

#include "strategex/classifier.hpp"
#include "strategex/cost.hpp"
#include "strategex/dataset.hpp"
#include "strategex/grid.hpp"
#include "strategex/monomials.hpp"
#include "strategex/rng.hpp"
#include "strategex/vec.hpp"

using namespace strategex;

TEST_CASE("Vec arithmetic and norms") {
  Vec a(3.0, 4.0);
  REQUIRE(a.dim == 2);
  REQUIRE(norm_l2(a) == Catch::Approx(5.0));
  REQUIRE(norm_l1(a) == Catch::Approx(7.0));
  REQUIRE(norm_linf(a) == Catch::Approx(4.0));

  Vec b = a - Vec(1.0, 1.0);
  REQUIRE(b[0] == Catch::Approx(2.0));
  REQUIRE(b[1] == Catch::Approx(3.0));
  REQUIRE(dot(a, b) == Catch::Approx(3.0 * 2.0 + 4.0 * 3.0));

  Vec u = normalized(Vec(0.0, -2.0));
  REQUIRE(u[1] == Catch::Approx(-1.0));
  REQUIRE_THROWS_AS(normalized(Vec::zero(2)), std::domain_error);
}

TEST_CASE("cost model lengths and dual norms") {
  CostModel l2(Norm::L2, 1.0);
  CostModel l1(Norm::L1, 1.0);
  CostModel linf(Norm::LInf, 1.0);
  Vec d(3.0, -4.0);
  REQUIRE(l2.length(d) == Catch::Approx(5.0));
  REQUIRE(l1.length(d) == Catch::Approx(7.0));
  REQUIRE(linf.length(d) == Catch::Approx(4.0));

  // The boundary shift of a linear classifier is alpha times the dual norm
  // of w: l2 pairs with l2, l1 movement costs pair with the max norm of w,
  // and max-norm costs pair with the sum.
  Vec w(1.0, 2.0);
  REQUIRE(l2.dual_norm(w) == Catch::Approx(std::sqrt(5.0)));
  REQUIRE(l1.dual_norm(w) == Catch::Approx(2.0));
  REQUIRE(linf.dual_norm(w) == Catch::Approx(3.0));

  REQUIRE_THROWS_AS(CostModel(Norm::L2, -0.25), std::invalid_argument);
  REQUIRE(norm_from_name("linf") == Norm::LInf);
  REQUIRE_THROWS_AS(norm_from_name("l3"), std::invalid_argument);
}

TEST_CASE("grid geometry round trips") {
  Box box = Box::of({-1.0, -2.0}, {1.0, 2.0});
  GridGeom geom = GridGeom::covering(box, 0.5);
  REQUIRE(geom.dim == 2);
  REQUIRE(geom.shape[0] == 4);
  REQUIRE(geom.shape[1] == 8);

  for (std::size_t i = 0; i < geom.cell_count(); ++i) {
    auto idx = geom.unindex(i);
    REQUIRE(geom.index(idx) == i);
    Vec c = geom.center(idx);
    auto back = geom.locate(c);
    REQUIRE(back == idx);
  }

  // Top edge belongs to the last cell rather than falling out of range.
  auto top = geom.locate(Vec(1.0 - 1e-12, 2.0 - 1e-12));
  REQUIRE(top[0] == 3);
  REQUIRE(top[1] == 7);
  REQUIRE_THROWS_AS(geom.locate(Vec(5.0, 0.0)), std::out_of_range);
}

TEST_CASE("label grid counts") {
  GridGeom geom = GridGeom::covering(Box::of({0.0, 0.0}, {1.0, 1.0}), 0.25);
  LabelGrid g = LabelGrid::zeros(geom);
  REQUIRE(g.count_positive() == 0);
  g.at({1, 1}) = 1;
  g.at({2, 3}) = 1;
  REQUIRE(g.count_positive() == 2);
  REQUIRE(g.has_both_labels());
}

TEST_CASE("monomial basis is graded and complete") {
  REQUIRE(monomial_count(0, 2) == 1);
  REQUIRE(monomial_count(2, 2) == 6);
  REQUIRE(monomial_count(10, 2) == 66);

  auto exps = monomial_exponents(2, 2);
  REQUIRE(exps.size() == 6);
  // Degree blocks come in order; within a block exponents are lexicographic
  // on (e0, e1) descending, i.e. 1, x, y, x^2, xy, y^2.
  REQUIRE(exps[0] == std::array<int, 3>{0, 0, 0});
  REQUIRE(exps[1] == std::array<int, 3>{1, 0, 0});
  REQUIRE(exps[2] == std::array<int, 3>{0, 1, 0});
  REQUIRE(exps[3] == std::array<int, 3>{2, 0, 0});
  REQUIRE(exps[4] == std::array<int, 3>{1, 1, 0});
  REQUIRE(exps[5] == std::array<int, 3>{0, 2, 0});

  REQUIRE(eval_monomial({1, 1, 0}, Vec(2.0, 3.0)) == Catch::Approx(6.0));
}

TEST_CASE("classifier scoring conventions") {
  SECTION("linear: boundary points are positive") {
    Classifier h = Classifier::linear(Vec(1.0, 0.0), 0.0);
    REQUIRE(predict(h, Vec(0.5, 0.0)));
    REQUIRE(predict(h, Vec(0.0, 7.0)));  // on the boundary
    REQUIRE_FALSE(predict(h, Vec(-0.5, 0.0)));
  }

  SECTION("ball unions honor polarity") {
    Classifier pos = Classifier::ball_union({Vec(0.0, 0.0)}, {1.0}, Polarity::PositiveInside);
    REQUIRE(predict(pos, Vec(0.5, 0.0)));
    REQUIRE(predict(pos, Vec(1.0, 0.0)));
    REQUIRE_FALSE(predict(pos, Vec(1.5, 0.0)));

    Classifier neg = Classifier::ball_union({Vec(0.0, 0.0)}, {1.0}, Polarity::NegativeInside);
    REQUIRE_FALSE(predict(neg, Vec(0.5, 0.0)));
    REQUIRE(predict(neg, Vec(1.0, 0.0)));  // boundary is positive either way
    REQUIRE(predict(neg, Vec(1.5, 0.0)));
  }

  SECTION("polytope distance score") {
    Classifier tri = Classifier::polytope({Vec(0.0, 0.0), Vec(2.0, 0.0), Vec(0.0, 2.0)},
                                          Polarity::PositiveInside);
    REQUIRE(predict(tri, Vec(0.4, 0.4)));
    REQUIRE(predict(tri, Vec(1.0, 0.0)));
    REQUIRE_FALSE(predict(tri, Vec(2.0, 2.0)));
    REQUIRE(score(tri, Vec(0.0, -1.0)) == Catch::Approx(-1.0));
    REQUIRE_THROWS_AS(
        Classifier::polytope({Vec(0.0, 0.0), Vec(1.0, 1.0), Vec(2.0, 2.0)}, Polarity::PositiveInside),
        std::invalid_argument);
  }

  SECTION("polynomial matches its monomials") {
    // x^2 + y^2 - 1, negative inside the unit disk.
    Classifier conic = Classifier::polynomial(2, 2, {-1.0, 0.0, 0.0, 1.0, 0.0, 1.0});
    REQUIRE(score(conic, Vec(0.0, 0.0)) == Catch::Approx(-1.0));
    REQUIRE(score(conic, Vec(2.0, 0.0)) == Catch::Approx(3.0));
  }

  SECTION("grid-backed classifiers are nearest-cell") {
    GridGeom geom = GridGeom::covering(Box::of({0.0, 0.0}, {1.0, 1.0}), 0.5);
    LabelGrid g = LabelGrid::zeros(geom);
    g.at({1, 1}) = 1;
    Classifier h = Classifier::grid_sampled(g);
    REQUIRE(predict(h, Vec(0.8, 0.8)));
    REQUIRE_FALSE(predict(h, Vec(0.2, 0.2)));
    REQUIRE_THROWS_AS(predict(h, Vec(3.0, 3.0)), std::out_of_range);
    REQUIRE_FALSE(predict_clamped(h, Vec(3.0, 3.0)));
  }
}

TEST_CASE("rng streams are deterministic and well distributed") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());

  Rng base(7);
  Rng c1 = Rng::derive(7, {1, 2});
  Rng c2 = Rng::derive(7, {1, 3});
  REQUIRE(c1.next() != c2.next());

  Rng u(123);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += u.uniform01();
  mean /= n;
  REQUIRE(mean == Catch::Approx(0.5).margin(0.02));

  Rng g(456);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = g.normal();
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  REQUIRE(m1 == Catch::Approx(0.0).margin(0.05));
  REQUIRE(m2 == Catch::Approx(1.0).margin(0.05));

  Rng lo(9);
  std::set<long long> seen;
  for (int i = 0; i < 1000; ++i) {
    long long v = lo.uniform_int(-2, 2);
    REQUIRE(v >= -2);
    REQUIRE(v <= 2);
    seen.insert(v);
  }
  REQUIRE(seen.size() == 5);
}

TEST_CASE("gaussian dataset shape and determinism") {
  Dataset d = make_gaussian_dataset(2.5, 25, 99);
  REQUIRE(d.points.size() == 50);
  REQUIRE(d.count_label(0) == 25);
  REQUIRE(d.count_label(1) == 25);
  REQUIRE(d.dim == 2);

  Dataset e = make_gaussian_dataset(2.5, 25, 99);
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    REQUIRE(d.points[i][0] == e.points[i][0]);
    REQUIRE(d.points[i][1] == e.points[i][1]);
  }

  // Class 1 sits near (mu, mu); with mu = 2.5 the sample means separate.
  double mx = 0.0;
  for (std::size_t i = 0; i < d.points.size(); ++i)
    if (d.labels[i] == 1) mx += d.points[i][0];
  mx /= 25.0;
  REQUIRE(mx == Catch::Approx(2.5).margin(1.0));
}

TEST_CASE("surround datasets pin the majority rate") {
  Dataset d1 = make_tetrahedron_dataset({Vec(0.0), Vec(10.0)}, 0.1);
  REQUIRE(d1.dim == 1);
  REQUIRE(d1.points.size() == 6);  // each positive brings d+1 = 2 negatives
  REQUIRE(d1.count_label(1) == 2);
  REQUIRE(d1.majority_rate() == Catch::Approx(2.0 / 3.0));

  Dataset d2 = make_tetrahedron_dataset({Vec(0.0, 0.0), Vec(10.0, 0.0)}, 0.1);
  REQUIRE(d2.points.size() == 8);  // d+1 = 3 negatives per positive
  REQUIRE(d2.majority_rate() == Catch::Approx(0.75));

  // Surrounding rings must not collide.
  REQUIRE_THROWS_AS(make_tetrahedron_dataset({Vec(0.0, 0.0), Vec(0.1, 0.0)}, 0.1),
                    std::invalid_argument);
}

TEST_CASE("simplex vertices are unit and centered") {
  for (int d = 1; d <= 3; ++d) {
    auto vs = unit_simplex_vertices(d);
    REQUIRE(vs.size() == static_cast<std::size_t>(d + 1));
    Vec sum = Vec::zero(d);
    for (const Vec& v : vs) {
      REQUIRE(norm_l2(v) == Catch::Approx(1.0));
      sum += v;
    }
    REQUIRE(norm_l2(sum) == Catch::Approx(0.0).margin(1e-12));
  }
}
