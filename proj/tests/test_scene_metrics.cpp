#include <doctest.h>

#include <map>

#include "glassseg/error.hpp"
#include "glassseg/metrics.hpp"
#include "glassseg/scene.hpp"
#include "oracles.hpp"

using namespace glassseg;

TEST_CASE("same seed gives identical scenes") {
  SceneSpec s;
  s.width = 64;
  s.height = 48;
  s.random_objects = 2;
  s.random_stains = 4;
  s.seed = 77;
  const Scene a = generate_synthetic_scene(s);
  const Scene b = generate_synthetic_scene(s);
  CHECK(a.clean == b.clean);
  CHECK(a.image == b.image);
  CHECK(a.objects == b.objects);
  CHECK(a.stains == b.stains);

  s.seed = 78;
  const Scene c = generate_synthetic_scene(s);
  CHECK_FALSE(c.image == a.image);
}

TEST_CASE("no objects and no stains gives a plain background") {
  SceneSpec s;
  s.width = 40;
  s.height = 30;
  const Scene sc = generate_synthetic_scene(s);
  CHECK(count_set(sc.objects) == 0);
  CHECK(count_set(sc.stains) == 0);
  CHECK(sc.image == sc.clean);
  for (double v : sc.clean.pixels()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(std::abs(v - s.background) <= s.texture_amplitude + s.noise_amplitude + 1e-12);
  }
}

TEST_CASE("a 10x10 rectangle covers exactly 100 pixels") {
  SceneSpec s;
  s.width = 32;
  s.height = 32;
  s.objects.push_back({ShapeKind::rectangle, 15.0, 12.0, 5.0, 5.0, 0.8});
  const Scene sc = generate_synthetic_scene(s);
  CHECK(count_set(sc.objects) == 100);
  CHECK(sc.objects(10, 7));
  CHECK(sc.objects(19, 16));
  CHECK_FALSE(sc.objects(9, 7));
  CHECK_FALSE(sc.objects(20, 16));
}

TEST_CASE("explicit stain pixels are marked and altered") {
  SceneSpec s;
  s.width = 32;
  s.height = 32;
  s.stain_clutter = 0.0;
  s.stains.push_back({16.0, 16.0, 4.0, 0.9, 1.0, 0.0, 0.0});
  const Scene sc = generate_synthetic_scene(s);
  CHECK(count_set(sc.stains) > 0);
  for (std::size_t i = 0; i < sc.stains.size(); ++i) {
    if (sc.stains[i]) {
      CHECK(sc.image[i] == doctest::Approx(0.9));
    } else {
      CHECK(sc.image[i] == sc.clean[i]);
    }
  }
}

TEST_CASE("out of bounds shapes are rejected") {
  SceneSpec s;
  s.width = 32;
  s.height = 32;
  s.objects.push_back({ShapeKind::ellipse, 30.0, 16.0, 5.0, 5.0, 0.8});
  CHECK_THROWS_AS(generate_synthetic_scene(s), Error);

  SceneSpec t;
  t.width = 32;
  t.height = 32;
  t.stains.push_back({2.0, 2.0, 5.0, 0.1, 0.8, 0.0, 0.0});
  CHECK_THROWS_AS(generate_synthetic_scene(t), Error);

  SceneSpec u;
  u.width = 0;
  CHECK_THROWS_AS(generate_synthetic_scene(u), Error);
}

TEST_CASE("easy scenes respect the coverage limits") {
  const std::vector<SceneSpec> specs = easy_scene_specs();
  REQUIRE(specs.size() == 5);
  for (const SceneSpec& s : specs) {
    CAPTURE(s.seed);
    const Scene sc = generate_synthetic_scene(s);
    CHECK(sc.image.width() == 128);
    CHECK(sc.image.height() == 128);
    const double coverage = static_cast<double>(count_set(sc.stains)) / sc.stains.size();
    CHECK(coverage > 0.0);
    CHECK(coverage <= 0.15);

    // Objects keep a gap, so each 8-connected component is one object.
    LabelMap objects(sc.objects.width(), sc.objects.height());
    for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = sc.objects[i];
    const LabelMap comps = oracle::components_by_relaxation(objects, true, 1);
    std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> area_and_hits;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (!comps[i]) continue;
      ++area_and_hits[comps[i]].first;
      area_and_hits[comps[i]].second += sc.stains[i];
    }
    CHECK(area_and_hits.size() >= 1);
    CHECK(area_and_hits.size() <= 3);
    for (const auto& [id, ah] : area_and_hits) {
      CHECK(static_cast<double>(ah.second) <= 0.2 * static_cast<double>(ah.first));
    }
  }
}

TEST_CASE("identical inputs give perfect metrics") {
  const GrayImage img = oracle::random_image(16, 12, 3);
  LabelMap regions(16, 12, 1);
  for (int y = 0; y < 12; ++y) {
    for (int x = 8; x < 16; ++x) regions(x, y) = 2;
  }
  const Mask truth_objects = mask_of_labels(regions, {2});
  const Mask stain = oracle::random_mask(16, 12, 0.3, 4);
  const Metrics m = compute_metrics(img, regions, {2}, img, truth_objects, stain);
  CHECK(m.mse == 0.0);
  CHECK(m.psnr == kPsnrCap);
  CHECK(m.iou == 1.0);
}

TEST_CASE("iou of disjoint and half overlapping masks") {
  Mask a(10, 1);
  Mask b(10, 1);
  for (int x = 0; x < 4; ++x) a(x, 0) = 1;
  for (int x = 6; x < 10; ++x) b(x, 0) = 1;
  CHECK(intersection_over_union(a, b) == 0.0);

  Mask c(10, 1);
  for (int x = 2; x < 6; ++x) c(x, 0) = 1;
  CHECK(intersection_over_union(a, c) == doctest::Approx(1.0 / 3.0));
  CHECK(intersection_over_union(Mask(3, 3), Mask(3, 3)) == 1.0);
}

TEST_CASE("mse and psnr over a region") {
  GrayImage a(4, 1, 0.0);
  GrayImage b(4, 1, 0.0);
  b(0, 0) = 0.1;
  b(3, 0) = 0.5;
  Mask region(4, 1);
  region(0, 0) = 1;
  region(1, 0) = 1;
  CHECK(mean_squared_error(a, b, region) == doctest::Approx(0.005));
  CHECK(psnr_from_mse(0.01) == doctest::Approx(20.0));
  CHECK(psnr_from_mse(0.0) == kPsnrCap);
  CHECK(mean_squared_error(a, b, Mask(4, 1)) == 0.0);
  CHECK_THROWS_AS(mean_squared_error(a, GrayImage(3, 1), Mask(4, 1)), Error);
}
