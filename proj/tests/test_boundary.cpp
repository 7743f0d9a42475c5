// Boundary geometry: cell extraction, curvature fits, the curvature map, and
// the case split for how boundary points land on the effective boundary.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "strategex/boundary.hpp"
#include "strategex/response.hpp"

using namespace strategex;

namespace {

LabelGrid raster_of(const Classifier& h, const Box& box, double cell) {
  return rasterize(h, GridGeom::covering(box, cell));
}

double angle_of(const Vec& v) { return std::atan2(v[1], v[0]); }

}  // namespace

TEST_CASE("boundary cells ring a disk and normals point inward") {
  const double cell = 0.05, R = 1.5;
  Classifier disk = Classifier::ball_union({Vec(0, 0)}, {R}, Polarity::PositiveInside);
  LabelGrid g = raster_of(disk, Box::of(Vec(-2.5, -2.5), Vec(2.5, 2.5)), cell);
  BoundarySet bs = extract_boundary(g);

  // a two-cell-thick ring: between one and three circumferences' worth
  double circumference_cells = 2.0 * M_PI * R / cell;
  REQUIRE(bs.points.size() > circumference_cells);
  REQUIRE(bs.points.size() < 3.0 * circumference_cells);

  int aligned = 0;
  for (const BoundaryPoint& bp : bs.points) {
    REQUIRE(std::abs(norm_l2(bp.center) - R) < 2.0 * cell);
    Vec inward = normalized(bp.center * -1.0);
    if (dot(bp.normal, inward) > 0.8) ++aligned;
  }
  // smoothed-gradient normals should agree with the radial direction nearly
  // everywhere
  REQUIRE(aligned > static_cast<int>(0.95 * bs.points.size()));
}

TEST_CASE("extract_boundary rejects single-label grids") {
  LabelGrid g = LabelGrid::zeros(GridGeom::covering(Box::of(Vec(0, 0), Vec(1, 1)), 0.1));
  REQUIRE_THROWS_AS(extract_boundary(g), std::invalid_argument);
  for (auto& l : g.labels) l = 1;
  REQUIRE_THROWS_AS(extract_boundary(g), std::invalid_argument);
}

TEST_CASE("curvature fits recover circle radii with the right sign") {
  const double cell = 0.05;
  for (double R : {0.5, 0.9, 1.5}) {
    Classifier disk = Classifier::ball_union({Vec(0, 0)}, {R}, Polarity::PositiveInside);
    LabelGrid g = raster_of(disk, Box::of(Vec(-R - 1, -R - 1), Vec(R + 1, R + 1)), cell);
    BoundarySet bs = extract_boundary(g);
    double window = std::max(16.0 * cell, 0.8 * R);
    CurvatureSample cs = signed_curvature(bs, Vec(R, 0.0), window);
    INFO("positive disk R=" << R);
    REQUIRE(cs.kappa * R == Catch::Approx(1.0).margin(0.12));

    Classifier hole = Classifier::ball_union({Vec(0, 0)}, {R}, Polarity::NegativeInside);
    LabelGrid g2 = raster_of(hole, Box::of(Vec(-R - 1, -R - 1), Vec(R + 1, R + 1)), cell);
    CurvatureSample cs2 = signed_curvature(extract_boundary(g2), Vec(0.0, R), window);
    INFO("negative hole R=" << R);
    REQUIRE(cs2.kappa * R == Catch::Approx(-1.0).margin(0.12));
  }
}

TEST_CASE("straight boundaries measure zero curvature at any slope") {
  const double cell = 0.05;
  for (double slope : {0.0, 0.3, 1.0}) {
    Classifier h = Classifier::linear(Vec(-slope, 1.0), 0.0);
    LabelGrid g = raster_of(h, Box::of(Vec(-2, -2), Vec(2, 2)), cell);
    BoundarySet bs = extract_boundary(g);
    CurvatureSample cs = signed_curvature(bs, Vec(0.0, 0.0), 16.0 * cell);
    INFO("slope=" << slope);
    REQUIRE(cs.kappa == 0.0);
  }
}

TEST_CASE("signed_curvature validates its window") {
  const double cell = 0.05;
  Classifier disk = Classifier::ball_union({Vec(0, 0)}, {1.0}, Polarity::PositiveInside);
  LabelGrid g = raster_of(disk, Box::of(Vec(-2, -2), Vec(2, 2)), cell);
  BoundarySet bs = extract_boundary(g);
  REQUIRE_THROWS_AS(signed_curvature(bs, Vec(1, 0), 2.0 * cell), std::invalid_argument);
}

TEST_CASE("curvature map: fixed points, kink, and rejection") {
  // a gentle bulge flattens: 1 / (1 + 0.5) = 2/3
  REQUIRE(effective_curvature(1.0, 0.5) == Catch::Approx(2.0 / 3.0));
  // a shallow dent deepens: -0.5 / (1 - 0.5) = -1
  REQUIRE(effective_curvature(-0.5, 1.0) == Catch::Approx(-1.0));
  // flat stays flat
  REQUIRE(effective_curvature(0.0, 2.0) == 0.0);
  // exactly at the critical curvature the image is a kink
  REQUIRE(std::isinf(effective_curvature(-2.0, 0.5)));
  REQUIRE(effective_curvature(-2.0, 0.5) > 0.0);
  // below it the point is gone
  REQUIRE_THROWS_AS(effective_curvature(-2.01, 0.5), WipedOutError);
  REQUIRE_THROWS_AS(effective_curvature(-10.0, 0.5), WipedOutError);
  // and the map demands a positive budget
  REQUIRE_THROWS_AS(effective_curvature(1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(effective_curvature(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("curvature map preserves sign and never exceeds 1/alpha") {
  const double alpha = 0.8;
  double prev = -std::numeric_limits<double>::infinity();
  for (double kappa = -1.2; kappa <= 3.0; kappa += 0.07) {
    double k2 = effective_curvature(kappa, alpha);
    if (kappa > 0) REQUIRE(k2 > 0.0);
    if (kappa < 0) REQUIRE(k2 < 0.0);
    REQUIRE(k2 < 1.0 / alpha);
    // strictly increasing on the surviving range
    REQUIRE(k2 > prev);
    prev = k2;
  }
}

TEST_CASE("measured effective curvature matches the map on offset disks") {
  const double cell = 0.05, alpha = 0.75;
  CostModel cost{Norm::L2, alpha};
  for (double R : {1.0, 1.5}) {
    Classifier disk = Classifier::ball_union({Vec(0, 0)}, {R}, Polarity::PositiveInside);
    Box box = Box::of(Vec(-R - 2, -R - 2), Vec(R + 2, R + 2));
    LabelGrid src = raster_of(disk, box, cell);
    LabelGrid eff = effective_grid(disk, box, cell, cost);

    double window = std::max(16.0 * cell, 0.8 * R);
    double k_src = signed_curvature(extract_boundary(src), Vec(R, 0.0), window).kappa;
    double k_eff =
        signed_curvature(extract_boundary(eff), Vec(R + alpha, 0.0), window + alpha).kappa;
    // the dilated circle has radius R + alpha, which is what the map says
    REQUIRE(k_eff == Catch::Approx(1.0 / (R + alpha)).epsilon(0.12));
    REQUIRE(effective_curvature(k_src, alpha) == Catch::Approx(k_eff).epsilon(0.2));
  }
}

TEST_CASE("preimage of a smooth boundary point is a tight outward cluster") {
  const double alpha = 0.75, res = 0.05;
  CostModel cost{Norm::L2, alpha};
  Classifier disk = Classifier::ball_union({Vec(0, 0)}, {2.0}, Polarity::PositiveInside);
  Vec x(2.0, 0.0);
  std::vector<Vec> pre = preimage_set(disk, x, cost, res);
  REQUIRE(!pre.empty());
  for (const Vec& s : pre) {
    REQUIRE(predict(disk, s) == 0);
    REQUIRE(norm_l2(s - x) == Catch::Approx(alpha).margin(1e-9));
    // every preimage sample sits near the outward normal ray
    REQUIRE(angle_of(s - x) == Catch::Approx(0.0).margin(0.25));
  }
}

TEST_CASE("preimage demands a boundary point") {
  CostModel cost{Norm::L2, 0.5};
  Classifier disk = Classifier::ball_union({Vec(0, 0)}, {1.0}, Polarity::PositiveInside);
  REQUIRE_THROWS_AS(preimage_set(disk, Vec(0.2, 0.0), cost, 0.05), std::invalid_argument);
  REQUIRE_THROWS_AS(preimage_set(disk, Vec(3.0, 3.0), cost, 0.05), std::invalid_argument);
}

TEST_CASE("smooth boundary point of a large disk maps one-to-one") {
  CostModel cost{Norm::L2, 0.75};
  Classifier disk = Classifier::ball_union({Vec(0, 0)}, {2.0}, Polarity::PositiveInside);
  MappingCase mc = classify_boundary_point(disk, Vec(2.0, 0.0), cost, 0.05);
  REQUIRE(mc.kind == MappingKind::OneToOne);
  REQUIRE(std::string(mapping_kind_name(mc.kind)) == "one_to_one");
}

TEST_CASE("hole tighter than the budget is wiped out directly") {
  CostModel cost{Norm::L2, 0.75};
  Classifier hole = Classifier::ball_union({Vec(0, 0)}, {0.5}, Polarity::NegativeInside);
  MappingCase mc = classify_boundary_point(hole, Vec(0.5, 0.0), cost, 0.05);
  REQUIRE(mc.kind == MappingKind::DirectWipeout);

  // sanity: the offset really does erase the hole
  LabelGrid eff = effective_grid(hole, Box::of(Vec(-2, -2), Vec(2, 2)), 0.05, cost);
  REQUIRE(eff.count_positive() == eff.geom.cell_count());
}

TEST_CASE("bank of a narrow channel is wiped out indirectly") {
  // a flat strip of negatives between two positive half-planes: no mover
  // pays full budget to reach the bank when the opposite bank is closer
  const double w = 0.375;  // half the channel is well under the budget
  CostModel cost{Norm::L2, 0.75};
  Classifier channel =
      Classifier::score_fn(2, [w](const Vec& p) { return std::abs(p[1]) - w / 2.0; });
  MappingCase mc = classify_boundary_point(channel, Vec(0.0, w / 2.0), cost, 0.05);
  REQUIRE(mc.kind == MappingKind::IndirectWipeout);

  // the strip indeed vanishes from the effective region
  LabelGrid eff = effective_grid(channel, Box::of(Vec(-2, -2), Vec(2, 2)), 0.05, cost);
  REQUIRE(eff.count_positive() == eff.geom.cell_count());
}

TEST_CASE("square corner expands into a quarter arc") {
  const double alpha = 0.75, res = 0.05;
  CostModel cost{Norm::L2, alpha};
  Classifier square = Classifier::polytope(
      {Vec(-1, -1), Vec(1, -1), Vec(1, 1), Vec(-1, 1)}, Polarity::PositiveInside);
  MappingCase mc = classify_boundary_point(square, Vec(1.0, 1.0), cost, res);
  REQUIRE(mc.kind == MappingKind::Expansion);

  // witness: an arc of budget-sphere samples filling the outward quadrant
  REQUIRE(mc.witness.size() >= 10);
  double lo = M_PI, hi = -M_PI;
  for (const Vec& s : mc.witness) {
    REQUIRE(norm_l2(s - Vec(1, 1)) == Catch::Approx(alpha).margin(1e-9));
    REQUIRE(predict(square, s) == 0);
    double a = angle_of(s - Vec(1, 1));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  REQUIRE(hi - lo == Catch::Approx(M_PI / 2.0).margin(0.25));
  REQUIRE(lo == Catch::Approx(0.0).margin(0.15));
  REQUIRE(hi == Catch::Approx(M_PI / 2.0).margin(0.15));

  // a mid-edge point of the same square is ordinary
  MappingCase edge = classify_boundary_point(square, Vec(1.0, 0.0), cost, res);
  REQUIRE(edge.kind == MappingKind::OneToOne);
}

TEST_CASE("three facing arcs collide at the pocket between them") {
  // positive disks at the vertices of an equilateral triangle, each exactly
  // one budget from the center: the three nearest rim points map to the same
  // spot
  const double alpha = 0.75, res = 0.05, R = 1.0, D = R + alpha;
  CostModel cost{Norm::L2, alpha};
  std::vector<Vec> centers;
  std::vector<double> radii;
  for (int j = 0; j < 3; ++j) {
    double a = 2.0 * M_PI * j / 3.0;
    centers.push_back(Vec(D * std::cos(a), D * std::sin(a)));
    radii.push_back(R);
  }
  Classifier h = Classifier::ball_union(centers, radii, Polarity::PositiveInside);

  Vec foot(alpha, 0.0);  // nearest rim point of the first disk to the origin
  MappingCase mc = classify_boundary_point(h, foot, cost, res);
  REQUIRE(mc.kind == MappingKind::Collision);
  REQUIRE(mc.witness.size() >= 3);
  // the colliding sources are the three facing rim arcs, one budget out
  for (const Vec& s : mc.witness) {
    REQUIRE(norm_l2(s) == Catch::Approx(alpha).margin(4.0 * res));
  }
}

TEST_CASE("preimage arc matches the witness on the square corner") {
  const double alpha = 0.6, res = 0.04;
  CostModel cost{Norm::L2, alpha};
  Classifier square = Classifier::polytope(
      {Vec(-1, -1), Vec(1, -1), Vec(1, 1), Vec(-1, 1)}, Polarity::PositiveInside);
  std::vector<Vec> pre = preimage_set(square, Vec(1.0, 1.0), cost, res);
  // the fan covers a quarter of the sphere's samples, give or take the rim
  int n = std::max(64, static_cast<int>(std::ceil(2.0 * M_PI * alpha / res)));
  REQUIRE(static_cast<int>(pre.size()) > n / 6);
  REQUIRE(static_cast<int>(pre.size()) < n / 2);
}
