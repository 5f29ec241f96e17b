#include <doctest.h>

#include "glassseg/config.hpp"
#include "glassseg/error.hpp"

using namespace glassseg;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_pipeline_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error for: " << text);
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("empty document gives the defaults") {
  CHECK(parse_pipeline_config("") == PipelineConfig{});
  CHECK(parse_pipeline_config("# nothing here\n; or here\n\n") == PipelineConfig{});
}

TEST_CASE("values are applied per section") {
  const PipelineConfig c = parse_pipeline_config(
      "[tv-inpaint]\nalpha = 12.5\nmax_iters = 40\n"
      "[gradient]\nnorm = absolute-sum\nnormalize = false\n"
      "[kmeans]\nk_clusters = 3\nseed = 18446744073709551615\ninput = inpainted-gray\n"
      "[watershed]\nconnectivity = 8\nmin_area = 5\n"
      "[laplace-interp]\nobjects = brightest-cluster\n"
      "[pipeline]\ndump_stages = yes\noutput = out/dir\n");
  CHECK(c.tv.alpha == 12.5);
  CHECK(c.tv.max_iters == 40);
  CHECK(c.gradient_norm == GradientNorm::absolute_sum);
  CHECK_FALSE(c.normalize_gradient);
  CHECK(c.kmeans.k_clusters == 3);
  CHECK(c.kmeans.seed == 18446744073709551615ull);
  CHECK(c.kmeans_input == KMeansInput::inpainted_gray);
  CHECK(c.flood_connectivity == Connectivity::eight);
  CHECK(c.markers.min_area == 5);
  CHECK(c.object_rule == ObjectRule::brightest_cluster);
  CHECK(c.dump_stages);
  CHECK(c.output_dir == "out/dir");
}

TEST_CASE("serialize then parse round-trips") {
  PipelineConfig c;
  CHECK(parse_pipeline_config(serialize_pipeline_config(c)) == c);

  c.luma = {0.2126, 0.7152, 0.0722};
  c.tv.alpha = 0.1 + 0.2;
  c.tv.eps = 3.3e-7;
  c.tv.tol = 0.0;
  c.diffusion.k = 1.0 / 3.0;
  c.diffusion.lam = 0.25;
  c.kmeans.tol = 1e-300;
  c.kmeans.seed = 123456789012345ull;
  c.kmeans_restarts = 7;
  c.kmeans.refine = false;
  c.markers.connectivity = Connectivity::eight;
  c.marker_clusters = 0;
  c.laplace.omega = 1.0;
  c.min_object_contrast = 0.0;
  c.gradient_norm = GradientNorm::absolute_sum;
  c.dump_stages = true;
  c.output_dir = "some/where";
  const std::string text = serialize_pipeline_config(c);
  CHECK(parse_pipeline_config(text) == c);
  CHECK(serialize_pipeline_config(parse_pipeline_config(text)) == text);
}

TEST_CASE("bad documents are config errors") {
  CHECK(kind_of("[tv-inpaint]\nalpah = 1\n") == ErrorKind::config);
  CHECK(kind_of("[nosuch]\nx = 1\n") == ErrorKind::config);
  CHECK(kind_of("alpha = 1\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\nalpha = fast\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\nalpha = 1.5x\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\nmax_iters = 2.5\n") == ErrorKind::config);
  CHECK(kind_of("[gradient]\nnorm = manhattan\n") == ErrorKind::config);
  CHECK(kind_of("[gradient]\nnormalize = maybe\n") == ErrorKind::config);
  CHECK(kind_of("[watershed]\nconnectivity = 6\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint\nalpha = 1\n") == ErrorKind::config);
}

TEST_CASE("out of range parameters are config errors") {
  CHECK(kind_of("[diffusion]\nlam = 0.3\n") == ErrorKind::config);
  CHECK(kind_of("[diffusion]\nlam = 0\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\nalpha = -1\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\neps = 0\n") == ErrorKind::config);
  CHECK(kind_of("[tv-inpaint]\ntol = -1e-3\n") == ErrorKind::config);
  CHECK(kind_of("[kmeans]\nk_clusters = 0\n") == ErrorKind::config);
  CHECK(kind_of("[kmeans]\nrestarts = 0\n") == ErrorKind::config);
  CHECK(kind_of("[laplace-interp]\nomega = 2\n") == ErrorKind::config);
  CHECK(kind_of("[laplace-interp]\ntol = 0\n") == ErrorKind::config);
  CHECK(kind_of("[watershed]\nmarker_clusters = -1\n") == ErrorKind::config);
}

TEST_CASE("scene spec round-trips with explicit shapes") {
  SceneSpec s;
  s.width = 90;
  s.height = 70;
  s.background = 0.15;
  s.random_objects = 2;
  s.random_stains = 5;
  s.stain_edge_clearance = 3;
  s.seed = 42;
  s.objects.push_back({ShapeKind::rectangle, 20.5, 30.0, 6.0, 4.0, 0.8});
  s.objects.push_back({ShapeKind::ellipse, 60.0, 35.0, 9.0, 7.5, 0.85});
  s.stains.push_back({40.0, 20.0, 5.0, 0.05, 0.7, 0.3, 1.25});

  const std::string text = serialize_scene_spec(s);
  const SceneSpec p = parse_scene_spec(text);
  CHECK(serialize_scene_spec(p) == text);
  CHECK(p.width == 90);
  CHECK(p.seed == 42);
  CHECK(p.stain_edge_clearance == 3);
  REQUIRE(p.objects.size() == 2);
  CHECK(p.objects[0].kind == ShapeKind::rectangle);
  CHECK(p.objects[0].cx == 20.5);
  CHECK(p.objects[1].half_h == 7.5);
  REQUIRE(p.stains.size() == 1);
  CHECK(p.stains[0].phase == 1.25);
}

TEST_CASE("scene shapes use numbered keys and optional stain fields") {
  const SceneSpec p = parse_scene_spec(
      "[scene]\nwidth = 50\nheight = 40\n"
      "object2 = ellipse 30 20 5 5 0.9\n"
      "object1 = rectangle 10 10 3 3 0.8\n"
      "stain1 = 25 25 4 0.1 0.8\n");
  REQUIRE(p.objects.size() == 2);
  CHECK(p.objects[0].kind == ShapeKind::rectangle);
  CHECK(p.objects[1].kind == ShapeKind::ellipse);
  REQUIRE(p.stains.size() == 1);
  CHECK(p.stains[0].wobble == StainBlob{}.wobble);

  CHECK_THROWS_AS(parse_scene_spec("[scene]\nobject1 = triangle 1 2 3 4 5\n"), Error);
  CHECK_THROWS_AS(parse_scene_spec("[scene]\nobject1 = ellipse 1 2 3\n"), Error);
  CHECK_THROWS_AS(parse_scene_spec("[scene]\nstainx = 1 2 3 4 5\n"), Error);
  CHECK_THROWS_AS(parse_scene_spec("[other]\nwidth = 5\n"), Error);
}
