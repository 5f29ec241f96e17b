#include <doctest.h>

#include "glassseg/laplace.hpp"
#include "glassseg/watershed.hpp"
#include "oracles.hpp"

using namespace glassseg;

namespace {

Mask box(int w, int h, int x0, int y0, int x1, int y1) {
  Mask m(w, h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m(x, y) = 1;
  }
  return m;
}

// Random blob: union of a few discs kept away from the border.
Mask random_blob(int w, int h, std::mt19937_64& rng) {
  Mask m(w, h);
  for (int d = 0; d < 3; ++d) {
    const double cx = 5 + oracle::uniform01(rng) * (w - 10);
    const double cy = 5 + oracle::uniform01(rng) * (h - 10);
    const double r = 1.5 + 2.5 * oracle::uniform01(rng);
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r) m(x, y) = 1;
      }
    }
  }
  return m;
}

}  // namespace

TEST_CASE("single pixel takes the mean of its four neighbors") {
  GrayImage img(3, 3, 0.0);
  img(1, 0) = 0.25;
  img(0, 1) = 0.5;
  img(2, 1) = 0.125;
  img(1, 2) = 1.0;
  img(1, 1) = 0.9;
  const LaplaceResult r = laplace_fill(img, box(3, 3, 1, 1, 2, 2));
  CHECK(r.image(1, 1) == (0.25 + 0.5 + 0.125 + 1.0) / 4);
}

TEST_CASE("constant boundary gives a constant fill") {
  GrayImage img(10, 10, 0.7);
  for (int y = 3; y < 7; ++y) {
    for (int x = 2; x < 8; ++x) img(x, y) = 0.0;
  }
  const LaplaceParams p;
  const LaplaceResult r = laplace_fill(img, box(10, 10, 2, 3, 8, 7), p);
  for (double v : r.image.pixels()) CHECK(std::abs(v - 0.7) <= p.tol);
  CHECK(r.converged);
}

TEST_CASE("linear ramp is reproduced") {
  GrayImage img(20, 12);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 20; ++x) img(x, y) = x / 19.0;
  }
  GrayImage holed = img;
  const Mask region = box(20, 12, 4, 3, 15, 9);
  for (std::size_t i = 0; i < holed.size(); ++i) {
    if (region[i]) holed[i] = 0.0;
  }
  LaplaceParams p;
  p.tol = 1e-8;
  const LaplaceResult r = laplace_fill(holed, region, p);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(r.image[i] - img[i]) <= 10 * p.tol);
  CHECK(r.max_residual <= p.tol);
}

TEST_CASE("random boundaries: immutability, maximum principle, mean value") {
  std::mt19937_64 rng(44);
  for (int s = 0; s < 10; ++s) {
    const GrayImage img = oracle::random_image(24, 20, 1000 + s);
    const Mask region = random_blob(24, 20, rng);
    const LaplaceParams p;
    const LaplaceResult r = laplace_fill(img, region, p);
    double lo = 1e9;
    double hi = -1e9;
    for (int y = 0; y < 20; ++y) {
      for (int x = 0; x < 24; ++x) {
        if (region(x, y)) continue;
        bool touches = false;
        for_each_neighbor(region, x, y, Connectivity::four,
                          [&](int nx, int ny) { touches |= region(nx, ny) != 0; });
        if (touches) {
          lo = std::min(lo, img(x, y));
          hi = std::max(hi, img(x, y));
        }
      }
    }
    for (int y = 0; y < 20; ++y) {
      for (int x = 0; x < 24; ++x) {
        if (!region(x, y)) {
          CHECK(r.image(x, y) == img(x, y));
          continue;
        }
        CHECK(r.image(x, y) >= lo);
        CHECK(r.image(x, y) <= hi);
        const double mean = (r.image(x - 1, y) + r.image(x + 1, y) + r.image(x, y - 1) +
                             r.image(x, y + 1)) / 4;
        CHECK(std::abs(r.image(x, y) - mean) <= 4 * p.tol);
      }
    }
    CHECK(r.max_residual <= p.tol);
  }
}

TEST_CASE("components are solved independently") {
  GrayImage img(12, 5, 0.2);
  for (int y = 0; y < 5; ++y) {
    for (int x = 6; x < 12; ++x) img(x, y) = 0.8;
  }
  Mask region = box(12, 5, 1, 1, 4, 4);
  const Mask right = box(12, 5, 8, 1, 11, 4);
  for (std::size_t i = 0; i < region.size(); ++i) region[i] |= right[i];
  const LaplaceResult r = laplace_fill(img, region);
  CHECK(r.components == 2);
  CHECK(r.image(2, 2) == doctest::Approx(0.2).epsilon(1e-7));
  CHECK(r.image(9, 2) == doctest::Approx(0.8).epsilon(1e-7));
}

TEST_CASE("regions touching the border use a zero-flux stencil") {
  GrayImage img(6, 1, std::vector<double>{0.0, 0.0, 0.0, 0.4, 0.5, 0.6});
  const LaplaceResult r = laplace_fill(img, box(6, 1, 0, 0, 3, 1));
  for (int x = 0; x < 3; ++x) CHECK(r.image(x, 0) == doctest::Approx(0.4).epsilon(1e-7));
}

TEST_CASE("laplace errors") {
  CHECK_THROWS_AS(laplace_fill(GrayImage(3, 3), Mask(3, 3, 1)), Error);
  CHECK_THROWS_AS(laplace_fill(GrayImage(3, 3), Mask(3, 2)), Error);
  LaplaceParams p;
  p.omega = 2.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("compose keeps objects and flattens the background") {
  GrayImage img(16, 16, 0.2);
  LabelMap regions(16, 16, 1);
  for (int y = 5; y < 10; ++y) {
    for (int x = 6; x < 11; ++x) {
      img(x, y) = 0.9;
      regions(x, y) = 2;
    }
  }
  const ComposeResult c = compose_output(img, regions, {2});
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (regions(x, y) == 2) {
        CHECK(c.image(x, y) == img(x, y));
      } else {
        CHECK(c.image(x, y) == doctest::Approx(0.2).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("compose: noisy background becomes harmonic, boundary ring kept") {
  GrayImage img = oracle::random_image(16, 16, 5);
  LabelMap regions(16, 16, 1);
  for (int y = 5; y < 10; ++y) {
    for (int x = 6; x < 11; ++x) regions(x, y) = 2;
  }
  const ComposeResult c = compose_output(img, regions, {2});
  const Mask edges = region_boundaries(regions);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (regions[i] == 2 || edges[i]) CHECK(c.image[i] == img[i]);
  }
  CHECK(c.fill.max_residual <= LaplaceParams{}.tol);
}

TEST_CASE("compose edge cases") {
  const GrayImage img = oracle::random_image(8, 8, 6);
  LabelMap regions(8, 8, 1);
  for (int x = 0; x < 8; ++x) regions(x, 7) = 3;
  CHECK(compose_output(img, regions, {1, 3}).image == img);
  CHECK_THROWS_AS(compose_output(img, LabelMap(8, 8, 1), {}), Error);
  CHECK_THROWS_AS(compose_output(img, regions, {2}), Error);
}
