#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "csrecon/metrics.hpp"
#include "support/oracles.hpp"

using namespace csrecon;
using oracles::random_image;

TEST_CASE("relative_error examples and errors") {
  const Image ref = random_image(8, 8, 1, 0.1, 1.0);
  CHECK(relative_error(ref, ref) == 0.0);

  Image scaled = ref;
  for (double& v : scaled.values()) v *= 1.1;
  CHECK_THAT(relative_error(ref, scaled), Catch::Matchers::WithinRel(10.0, 1e-10));

  const Image test = random_image(8, 8, 2);
  double dn = 0.0;
  double rn = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dn += (test[i] - ref[i]) * (test[i] - ref[i]);
    rn += ref[i] * ref[i];
  }
  CHECK_THAT(relative_error(ref, test),
             Catch::Matchers::WithinAbs(100.0 * std::sqrt(dn / rn), 1e-12));

  CHECK_THROWS_AS(relative_error(Image(8, 8), test), std::invalid_argument);
  CHECK_THROWS_AS(relative_error(ref, Image(4, 4)), std::invalid_argument);
}

TEST_CASE("psnr examples") {
  const Image ref = random_image(8, 8, 3, 0.0, 1.0);
  CHECK(psnr(ref, ref) == std::numeric_limits<double>::infinity());

  Image off = ref;
  for (double& v : off.values()) v += 0.1;
  CHECK_THAT(psnr(ref, off, 1.0), Catch::Matchers::WithinAbs(20.0, 1e-9));

  CHECK_THROWS_AS(psnr(ref, Image(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(psnr(ref, off, 0.0), std::invalid_argument);
}

TEST_CASE("psnr/relative-error consistency identity on 1000 random pairs") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const int w = 4 + static_cast<int>(seed % 8);
    const int h = 4 + static_cast<int>((seed / 8) % 8);
    const Image ref = random_image(w, h, seed, 0.05, 1.0);
    const Image test = random_image(w, h, seed + 100000, 0.0, 1.0);
    const QualityReport q = quality(ref, test);
    if (q.relative_error_pct == 0.0) {
      CHECK(q.psnr_db == std::numeric_limits<double>::infinity());
      continue;
    }
    const double n = std::sqrt(static_cast<double>(ref.size()));
    double ref_norm = 0.0;
    for (double v : ref) ref_norm += v * v;
    ref_norm = std::sqrt(ref_norm);
    const double expected =
        20.0 * std::log10(q.peak * n * 100.0 / (q.relative_error_pct * ref_norm));
    CHECK_THAT(q.psnr_db, Catch::Matchers::WithinAbs(expected, 1e-9));
  }
}

TEST_CASE("psnr strictly decreases as uniform error grows") {
  const Image ref = random_image(16, 16, 9, 0.2, 0.8);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps = 0.01; eps <= 0.5; eps += 0.01) {
    Image test = ref;
    for (double& v : test.values()) v += eps;
    const double p = psnr(ref, test);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("relative_error is invariant under simultaneous scaling") {
  const Image ref = random_image(8, 8, 10, 0.1, 1.0);
  const Image test = random_image(8, 8, 11, 0.1, 1.0);
  Image ref2 = ref;
  Image test2 = test;
  for (double& v : ref2.values()) v *= 3.7;
  for (double& v : test2.values()) v *= 3.7;
  CHECK_THAT(relative_error(ref2, test2),
             Catch::Matchers::WithinRel(relative_error(ref, test), 1e-12));
}
