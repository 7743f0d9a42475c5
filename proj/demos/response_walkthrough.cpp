// Walks through what a budget of alpha does to a couple of classifiers and
// prints the resulting label grids as ASCII art. Useful as a smoke check and
// as a first taste of the library.

#include <cstdio>

#include "strategex/classifier.hpp"
#include "strategex/response.hpp"

using namespace strategex;

namespace {

void print_grid(const LabelGrid& g, const char* title) {
  std::printf("%s (%d x %d)\n", title, g.geom.shape[0], g.geom.shape[1]);
  // Row-major axis 0 is x; print y top to bottom for a conventional picture.
  for (int j = g.geom.shape[1] - 1; j >= 0; --j) {
    for (int i = 0; i < g.geom.shape[0]; ++i)
      std::putchar(g.at({i, j}) ? '#' : '.');
    std::putchar('\n');
  }
  std::putchar('\n');
}

}  // namespace

int main() {
  CostModel cost(Norm::L2, 1.0);
  Box box = Box::of({-3.0, -3.0}, {3.0, 3.0});
  double cell = 0.12;

  Classifier disk = Classifier::ball_union({Vec(0.0, 0.0)}, {1.2}, Polarity::PositiveInside);
  LabelGrid before = rasterize(disk, GridGeom::covering(box, cell));
  LabelGrid after = effective_grid(disk, box, cell, cost);
  print_grid(before, "positive disk, r = 1.2");
  print_grid(after, "after best responses, alpha = 1 (r grows to 2.2)");

  Classifier notch = Classifier::ball_union({Vec(0.0, 0.0)}, {0.6}, Polarity::NegativeInside);
  LabelGrid nbefore = rasterize(notch, GridGeom::covering(box, cell));
  LabelGrid nafter = effective_grid(notch, box, cell, cost);
  print_grid(nbefore, "negative disk, r = 0.6 < alpha");
  print_grid(nafter, "after best responses: the hole is gone (wipeout)");
  return 0;
}
