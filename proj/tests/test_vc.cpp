// Shattering arithmetic on finite families: gaming can create capacity
// (four-ball family), erase it (wipeout lattice), or leave it untouched
// (budget-multiple disks, scaled-up configurations).
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "strategex/vc.hpp"

using namespace strategex;

namespace {

const Vec kE1(1.0, 0.0);
const Vec kE2(0.0, 1.0);

// Every subset of the given points up to size three; enough to certify a
// bound of 2 exactly when the universe is the whole lattice.
std::vector<std::vector<Vec>> subsets_up_to_three(const std::vector<Vec>& universe) {
  std::vector<std::vector<Vec>> sets;
  const size_t n = universe.size();
  for (size_t i = 0; i < n; ++i) {
    sets.push_back({universe[i]});
    for (size_t j = i + 1; j < n; ++j) {
      sets.push_back({universe[i], universe[j]});
      for (size_t k = j + 1; k < n; ++k)
        sets.push_back({universe[i], universe[j], universe[k]});
    }
  }
  return sets;
}

std::vector<Vec> wipeout_lattice_points(int m, double spacing) {
  std::vector<Vec> pts;
  double shift = (m - 1) / 2.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      pts.emplace_back((i - shift) * spacing, (j - shift) * spacing);
  return pts;
}

}  // namespace

TEST_CASE("four-ball family gains a shattered pair after gaming") {
  FiniteClass fam = build_fixture("four-balls");
  CostModel cost(Norm::L2, 0.75);
  const double res = 0.02;

  REQUIRE(fam.classifiers.size() == 4);
  REQUIRE(fam.name.find("four-balls") == 0);

  SECTION("one point in and out of a ball is shattered without gaming") {
    ShatterResult one = shatters(fam, {kE1}, false, cost, res);
    CHECK(one.shattered);
    CHECK_FALSE(one.missing_pattern.has_value());
  }

  SECTION("no pair is shattered without gaming; both-positive is the gap") {
    ShatterResult pair = shatters(fam, {kE1, kE2}, false, cost, res);
    CHECK_FALSE(pair.shattered);
    REQUIRE(pair.missing_pattern.has_value());
    CHECK(*pair.missing_pattern == std::vector<int>{1, 1});
  }

  SECTION("gaming closes the gap through exact boundary ties") {
    // The ball at (1,1) sits at distance exactly radius+alpha from both
    // witnesses, and boundary contact counts as reachable.
    const Classifier& corner = fam.classifiers[2];
    CHECK(effective_label(corner, kE1, cost, res) == 1);
    CHECK(effective_label(corner, kE2, cost, res) == 1);
    const Classifier& offset = fam.classifiers[3];
    CHECK(effective_label(offset, kE1, cost, res) == 0);
    CHECK(effective_label(offset, kE2, cost, res) == 0);

    ShatterResult pair = shatters(fam, {kE1, kE2}, true, cost, res);
    CHECK(pair.shattered);
  }

  SECTION("exhaustive bounds over the 5x5 candidate lattice") {
    std::vector<Vec> lattice;
    const std::vector<double> coords = {-0.5, 0.0, 0.5, 1.0, 1.5};
    for (double x : coords)
      for (double y : coords) lattice.emplace_back(x, y);
    std::vector<std::vector<Vec>> candidates = subsets_up_to_three(lattice);

    CHECK(vc_lower_bound(fam, candidates, false, cost, res) == 1);
    CHECK(vc_lower_bound(fam, candidates, true, cost, res) == 2);
  }
}

TEST_CASE("wipeout lattice shatters standardly and collapses after gaming") {
  FixtureParams params;
  params.alpha = 0.9;
  params.delta = 0.1;
  params.lattice = 3;
  params.spacing = 1.8;
  FiniteClass fam = build_fixture("wipeout-lattice", params);
  CostModel cost(Norm::L2, params.alpha);
  const double res = 0.05;
  std::vector<Vec> lattice = wipeout_lattice_points(params.lattice, params.spacing);

  REQUIRE(fam.classifiers.size() == 512);
  REQUIRE(lattice.size() == 9);

  SECTION("all nine lattice points are shattered without gaming") {
    ShatterResult full = shatters(fam, lattice, false, cost, res);
    CHECK(full.shattered);
    CHECK(vc_lower_bound(fam, {lattice}, false, cost, res) == 9);
  }

  SECTION("after gaming every point is positive under every classifier") {
    ShatterResult one = shatters(fam, {lattice[0]}, true, cost, res);
    CHECK_FALSE(one.shattered);
    REQUIRE(one.missing_pattern.has_value());
    CHECK(*one.missing_pattern == std::vector<int>{0});

    std::vector<std::vector<Vec>> singletons;
    for (const Vec& p : lattice) singletons.push_back({p});
    CHECK(vc_lower_bound(fam, singletons, true, cost, res) == 0);
  }

  SECTION("all 512 effective grids are cellwise identical and all-positive") {
    Box box = Box::of(Vec(-2.8, -2.8), Vec(2.8, 2.8));
    LabelGrid first = effective_grid(fam.classifiers[0], box, 0.1, cost);
    REQUIRE(std::all_of(first.labels.begin(), first.labels.end(),
                        [](uint8_t v) { return v == 1; }));
    for (size_t i = 1; i < fam.classifiers.size(); ++i) {
      LabelGrid g = effective_grid(fam.classifiers[i], box, 0.1, cost);
      REQUIRE(g.labels == first.labels);
    }
  }
}

TEST_CASE("negative disks with budget-multiple radii keep their bound") {
  // Negative-inside disks with radii k*alpha shrink to (k-1)*alpha under
  // gaming but stay within the same family shape, so the bound is unmoved.
  const double alpha = 0.5;
  CostModel cost(Norm::L2, alpha);
  FiniteClass fam;
  fam.name = "budget-multiple-disks";
  for (const Vec& c : {Vec(0.0, 0.0), Vec(2.0, 0.0)})
    for (double k : {1.0, 2.0})
      fam.classifiers.push_back(
          Classifier::ball_union({c}, {k * alpha}, Polarity::NegativeInside));

  std::vector<std::vector<Vec>> candidates = {
      {Vec(0.0, 0.0)}, {Vec(2.0, 0.0)}, {Vec(0.0, 0.0), Vec(2.0, 0.0)}};
  int standard = vc_lower_bound(fam, candidates, false, cost, 0.02);
  int effective = vc_lower_bound(fam, candidates, true, cost, 0.02);
  CHECK(standard == 1);
  CHECK(effective == standard);
}

TEST_CASE("flipping one interior positive point leaves gaming unchanged") {
  Classifier disk = Classifier::ball_union({Vec(0.0, 0.0)}, {1.0}, Polarity::PositiveInside);
  GridGeom geom = GridGeom::covering(Box::of(Vec(-2.0, -2.0), Vec(2.0, 2.0)), 0.05);
  CostModel cost(Norm::L2, 0.5);

  LabelGrid g = rasterize(disk, geom);
  LabelGrid flipped = g;
  size_t inner = geom.index(geom.locate(Vec(0.0, 0.0)));
  REQUIRE(g.labels[inner] == 1);
  flipped.labels[inner] = 0;

  // The rasters differ at exactly the flipped cell...
  size_t diffs = 0;
  for (size_t i = 0; i < g.labels.size(); ++i)
    if (g.labels[i] != flipped.labels[i]) ++diffs;
  REQUIRE(diffs == 1);

  // ...but the after-gaming labels agree everywhere: every cell near the
  // flipped one still reaches plenty of other positive cells.
  DistanceField base = distance_field(g, cost);
  DistanceField alt = distance_field(flipped, cost);
  for (size_t i = 0; i < g.labels.size(); ++i)
    REQUIRE((base.dist[i] <= cost.alpha) == (alt.dist[i] <= cost.alpha));

  Classifier hg = Classifier::grid_sampled(g);
  Classifier hf = Classifier::grid_sampled(flipped);
  for (const Vec& probe : {Vec(0.0, 0.0), Vec(0.9, 0.0), Vec(1.3, 0.0), Vec(-1.2, 0.7)})
    CHECK(effective_label(hg, probe, cost, 0.05) == effective_label(hf, probe, cost, 0.05));
}

TEST_CASE("scaling a shattered configuration freezes every witness") {
  const double res = 0.02;

  SECTION("axis-sign halfplanes are closed under any scaling") {
    FiniteClass fam;
    fam.name = "axis-sign-halfplanes";
    fam.classifiers = {
        Classifier::linear(Vec(1.0, 0.0), 0.0), Classifier::linear(Vec(-1.0, 0.0), 0.0),
        Classifier::linear(Vec(0.0, 1.0), 0.0), Classifier::linear(Vec(0.0, -1.0), 0.0)};
    std::vector<Vec> pts = {Vec(1.0, 1.0), Vec(1.0, -1.0)};
    CostModel cost(Norm::L2, 1.0);
    REQUIRE(shatters(fam, pts, false, cost, res).shattered);

    ScalingReport report = scaling_closure_check(fam, pts, cost, res, {0.5, 2.0, 7.5});
    CHECK(report.c_neg == 1.0);
    CHECK(report.scale == 2.0);
    CHECK(report.preserved);
    CHECK(report.pairs_checked == 8);
  }

  SECTION("four-ball witness is priced out at scale (alpha+1)/c_neg") {
    FiniteClass fam = build_fixture("four-balls");
    CostModel cost(Norm::L2, 0.75);
    ScalingReport report = scaling_closure_check(fam, {kE1}, cost, res, {});
    // Cheapest escape: from (1,0) into the ball at (1,1), exactly 1 - 0.25.
    CHECK(report.c_neg == 0.75);
    CHECK(report.scale == Catch::Approx((0.75 + 1.0) / 0.75));
    CHECK(report.preserved);
    CHECK(report.pairs_checked == 4);
    CHECK(report.first_violation.empty());
  }

  SECTION("singleton escape cost is the distance to the boundary") {
    FiniteClass fam;
    fam.name = "one-disk";
    fam.classifiers = {
        Classifier::ball_union({Vec(0.0, 0.0)}, {0.25}, Polarity::PositiveInside)};
    CostModel cost(Norm::L2, 0.75);
    ScalingReport report = scaling_closure_check(fam, {kE1}, cost, res, {});
    CHECK(report.c_neg == 0.75);
    CHECK(report.preserved);
  }

  SECTION("the four-ball family is not closed under scaling") {
    FiniteClass fam = build_fixture("four-balls");
    CostModel cost(Norm::L2, 0.75);
    REQUIRE_THROWS_WITH(scaling_closure_check(fam, {kE1}, cost, res, {2.0}),
                        Catch::Matchers::ContainsSubstring("scaled classifiers not in"));
  }

  SECTION("pre-scaled fixture loses the gamed pair: bounds collapse to 1") {
    FixtureParams params;
    params.scale = 3.0;
    FiniteClass fam = build_fixture("scaled-lattice-balls", params);
    CostModel cost(Norm::L2, 0.75);
    std::vector<Vec> scaled = {Vec(3.0, 0.0), Vec(0.0, 3.0), Vec(3.0, 3.0),
                               Vec(-0.15, -0.15)};
    std::vector<std::vector<Vec>> candidates;
    for (size_t i = 0; i < scaled.size(); ++i) {
      candidates.push_back({scaled[i]});
      for (size_t j = i + 1; j < scaled.size(); ++j)
        candidates.push_back({scaled[i], scaled[j]});
    }
    CHECK(vc_lower_bound(fam, candidates, false, cost, res) == 1);
    CHECK(vc_lower_bound(fam, candidates, true, cost, res) == 1);
  }
}

TEST_CASE("negative polytopes only shrink under gaming") {
  FixtureParams params;
  params.vertices = 3;
  params.bound = 2.0;
  params.samples = 6;
  FiniteClass fam = build_fixture("negative-polytopes", params);
  REQUIRE(fam.classifiers.size() == 6);

  CostModel cost(Norm::L2, 0.4);
  Box box = Box::of(Vec(-3.0, -3.0), Vec(3.0, 3.0));
  const double cell = 0.05;
  for (const Classifier& h : fam.classifiers) {
    const Polytope* pt = std::get_if<Polytope>(&h.variant);
    REQUIRE(pt != nullptr);
    REQUIRE(pt->polarity == Polarity::NegativeInside);
    REQUIRE(pt->vertices.size() == 3);
    for (const Vec& v : pt->vertices) REQUIRE(norm_l2(v) <= params.bound);

    LabelGrid before = rasterize(h, GridGeom::covering(box, cell));
    LabelGrid after = effective_grid(h, box, cell, cost);
    REQUIRE(before.labels.size() == after.labels.size());
    size_t grown = 0;
    for (size_t i = 0; i < before.labels.size(); ++i) {
      // Gaming never creates new negatives: effective-negative cells must
      // already have been negative.
      REQUIRE_FALSE((after.labels[i] == 0 && before.labels[i] == 1));
      if (after.labels[i] == 1 && before.labels[i] == 0) ++grown;
    }
    CHECK(grown > 0);  // the negative triangle really did shrink
  }
}

TEST_CASE("shattering interface edge cases") {
  FiniteClass fam = build_fixture("four-balls");
  CostModel cost(Norm::L2, 0.75);

  SECTION("zero points are trivially shattered") {
    ShatterResult res = shatters(fam, {}, false, cost, 0.02);
    CHECK(res.shattered);
  }

  SECTION("thirteen points exceed the enumeration cap") {
    std::vector<Vec> many;
    for (int i = 0; i < 13; ++i) many.emplace_back(static_cast<double>(i), 0.0);
    REQUIRE_THROWS_AS(shatters(fam, many, false, cost, 0.02), std::invalid_argument);
    REQUIRE_THROWS_AS(vc_lower_bound(fam, {many}, false, cost, 0.02), std::invalid_argument);
  }

  SECTION("a zero budget makes gamed and plain shattering coincide") {
    CostModel frozen(Norm::L2, 0.0);
    ShatterResult gamed = shatters(fam, {kE1, kE2}, true, frozen, 0.02);
    ShatterResult plain = shatters(fam, {kE1, kE2}, false, frozen, 0.02);
    CHECK(gamed.shattered == plain.shattered);
    REQUIRE(gamed.missing_pattern.has_value());
    CHECK(*gamed.missing_pattern == *plain.missing_pattern);
  }

  SECTION("malformed families and names are rejected") {
    FiniteClass empty;
    REQUIRE_THROWS_AS(shatters(empty, {kE1}, false, cost, 0.02), std::invalid_argument);

    FiniteClass mixed;
    mixed.classifiers = {Classifier::linear(Vec(1.0, 0.0), 0.0),
                         Classifier::score_fn(1, [](const Vec& x) { return x[0]; })};
    REQUIRE_THROWS_AS(shatters(mixed, {kE1}, false, cost, 0.02), std::invalid_argument);

    REQUIRE_THROWS_AS(build_fixture("mystery-fixture"), std::invalid_argument);
  }
}
