#include <doctest.h>

#include <set>

#include "glassseg/watershed.hpp"
#include "oracles.hpp"

using namespace glassseg;

namespace {

LabelMap random_labels(int w, int h, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabelMap m(w, h);
  for (auto& v : m.pixels()) v = 1 + static_cast<std::uint32_t>(rng() % k);
  return m;
}

LabelMap random_point_markers(int w, int h, int count, std::mt19937_64& rng) {
  LabelMap m(w, h);
  for (int id = 1; id <= count;) {
    const std::size_t i = rng() % m.size();
    if (m[i]) continue;
    m[i] = static_cast<std::uint32_t>(id++);
  }
  return m;
}

// Every region is one connected piece containing its marker pixels.
bool regions_connected(const LabelMap& regions, const LabelMap& markers, Connectivity conn) {
  const std::uint32_t count = max_label(regions);
  for (std::uint32_t id = 1; id <= count; ++id) {
    LabelMap only(regions.width(), regions.height());
    for (std::size_t i = 0; i < regions.size(); ++i) only[i] = regions[i] == id;
    const LabelMap comp = oracle::components_by_relaxation(only, conn == Connectivity::eight, 1);
    if (max_label(comp) != 1) return false;
    for (std::size_t i = 0; i < markers.size(); ++i) {
      if (markers[i] == id && regions[i] != id) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("uniform cluster map is one marker") {
  const LabelMap m = markers_from_clusters(LabelMap(5, 4, 3));
  for (auto v : m.pixels()) CHECK(v == 1);
}

TEST_CASE("separated blobs of one label get distinct ids") {
  // 1 1 2 1 1
  const LabelMap c(5, 1, std::vector<std::uint32_t>{1, 1, 2, 1, 1});
  const LabelMap m = markers_from_clusters(c);
  CHECK(m == LabelMap(5, 1, std::vector<std::uint32_t>{1, 1, 2, 3, 3}));
}

TEST_CASE("components below min_area are dropped") {
  LabelMap c(4, 4, 1);
  c(0, 0) = 2;
  c(1, 0) = 2;
  c(0, 1) = 2;
  MarkerParams p;
  p.min_area = 4;
  const LabelMap m = markers_from_clusters(c, p);
  CHECK(m(0, 0) == 0);
  CHECK(m(1, 0) == 0);
  CHECK(m(0, 1) == 0);
  CHECK(m(3, 3) == 1);
}

TEST_CASE("diagonal contact joins only under 8-connectivity") {
  const LabelMap c(2, 2, std::vector<std::uint32_t>{1, 2, 2, 1});
  CHECK(max_label(markers_from_clusters(c, {1, Connectivity::four})) == 4);
  CHECK(max_label(markers_from_clusters(c, {1, Connectivity::eight})) == 2);
}

TEST_CASE("marker components agree with the relaxation oracle") {
  for (int s = 0; s < 20; ++s) {
    const LabelMap c = random_labels(12, 9, 3, 300 + s);
    for (auto conn : {Connectivity::four, Connectivity::eight}) {
      const int area = 1 + s % 4;
      CHECK(markers_from_clusters(c, {area, conn}) ==
            oracle::components_by_relaxation(c, conn == Connectivity::eight, area));
    }
  }
}

TEST_CASE("constant relief floods everything from one marker") {
  LabelMap markers(6, 5);
  markers(4, 2) = 7;
  const LabelMap out = watershed_flood(GrayImage(6, 5, 0.3), markers);
  for (auto v : out.pixels()) CHECK(v == 7);
}

TEST_CASE("ridge pixel goes to the first enqueuer") {
  const GrayImage relief(3, 1, std::vector<double>{0.0, 1.0, 0.0});
  const LabelMap markers(3, 1, std::vector<std::uint32_t>{1, 0, 2});
  CHECK(watershed_flood(relief, markers) == LabelMap(3, 1, std::vector<std::uint32_t>{1, 1, 2}));
}

TEST_CASE("two basins split on the ridge") {
  GrayImage relief(8, 8);
  auto d1 = [](int x, int y) { return (x - 1.0) * (x - 1.0) + (y - 3.0) * (y - 3.0); };
  auto d2 = [](int x, int y) { return (x - 6.0) * (x - 6.0) + (y - 4.0) * (y - 4.0); };
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) relief(x, y) = std::min(d1(x, y), d2(x, y));
  }
  LabelMap markers(8, 8);
  markers(1, 3) = 1;
  markers(6, 4) = 2;
  const LabelMap out = watershed_flood(relief, markers);
  CHECK(out == oracle::immersion_flood(relief, markers, false));
  // Everything below the lowest ridge point (x = 3.5 gives relief >= 6.25)
  // belongs to its own basin.
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      if (relief(x, y) >= 6.25) continue;
      CHECK(out(x, y) == (d1(x, y) < d2(x, y) ? 1u : 2u));
    }
  }
}

TEST_CASE("random reliefs: oracle, totality, markers, connectivity, monotone invariance") {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 25; ++s) {
    const GrayImage relief = oracle::random_image(8, 8, 700 + s);
    const int count = 2 + s % 2;
    const LabelMap markers = random_point_markers(8, 8, count, rng);
    for (auto conn : {Connectivity::four, Connectivity::eight}) {
      const LabelMap out = watershed_flood(relief, markers, conn);
      CHECK(out == oracle::immersion_flood(relief, markers, conn == Connectivity::eight));
      for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i] != 0);
        if (markers[i]) CHECK(out[i] == markers[i]);
      }
      CHECK(std::set<std::uint32_t>(out.pixels().begin(), out.pixels().end()).size() ==
            static_cast<std::size_t>(count));
      CHECK(regions_connected(out, markers, conn));

      GrayImage squared = relief;
      for (double& v : squared.pixels()) v = v * v;
      CHECK(watershed_flood(squared, markers, conn) == out);
    }
  }
}

TEST_CASE("quantized reliefs with plateaus still match the oracle") {
  std::mt19937_64 rng(12);
  for (int s = 0; s < 25; ++s) {
    GrayImage relief = oracle::random_image(8, 8, 900 + s);
    for (double& v : relief.pixels()) v = std::floor(v * 3.0);
    const LabelMap markers = random_point_markers(8, 8, 3, rng);
    CHECK(watershed_flood(relief, markers) == oracle::immersion_flood(relief, markers, false));
  }
}

TEST_CASE("flood errors") {
  CHECK_THROWS_AS(watershed_flood(GrayImage(3, 3), LabelMap(3, 3)), Error);
  CHECK_THROWS_AS(watershed_flood(GrayImage(3, 3), LabelMap(3, 2, 1)), Error);
}

TEST_CASE("region boundaries") {
  const LabelMap l(4, 1, std::vector<std::uint32_t>{1, 1, 2, 2});
  CHECK(region_boundaries(l) == Mask(4, 1, std::vector<std::uint8_t>{0, 1, 1, 0}));
}
