#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "csrecon/phantom.hpp"
#include "csrecon/tv.hpp"

using namespace csrecon;

TEST_CASE("phantom is deterministic, bounded, and piecewise constant") {
  const Image a = ellipse_phantom(128, 128);
  const Image b = ellipse_phantom(128, 128);
  CHECK(a == b);

  std::set<double> levels;
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    levels.insert(v);
  }
  // membership tests produce a handful of exact intensity levels
  CHECK(levels.size() <= 16);
  CHECK(levels.size() >= 4);

  // flat regions dominate: TV is far below that of a same-range noise image
  const double tv = tv_value(a, BoundaryRule::neumann);
  CHECK(tv > 0.0);
  CHECK(tv < 0.05 * static_cast<double>(a.size()));
}

TEST_CASE("phantom scales to non-square grids") {
  const Image p = ellipse_phantom(48, 36);
  CHECK(p.width() == 48);
  CHECK(p.height() == 36);
  double mass = 0.0;
  for (double v : p) mass += v;
  CHECK(mass > 0.0);
}
