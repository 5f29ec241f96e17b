#include "glassseg/watershed.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <vector>

namespace glassseg {

void MarkerParams::validate() const {
  if (min_area < 1) fail(ErrorKind::config, "watershed: min_area must be >= 1");
  if (connectivity != Connectivity::four && connectivity != Connectivity::eight) {
    fail(ErrorKind::config, "watershed: connectivity must be 4 or 8");
  }
}

LabelMap markers_from_clusters(const LabelMap& clusters, const MarkerParams& p) {
  p.validate();
  const int w = clusters.width();
  LabelMap out(w, clusters.height());
  std::vector<std::uint8_t> seen(clusters.size(), 0);
  std::vector<std::size_t> component;
  std::vector<std::size_t> stack;
  std::uint32_t next_id = 1;

  for (std::size_t start = 0; start < clusters.size(); ++start) {
    if (seen[start] || clusters[start] == 0) continue;
    const std::uint32_t label = clusters[start];
    component.clear();
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      component.push_back(i);
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      for_each_neighbor(clusters, x, y, p.connectivity, [&](int nx, int ny) {
        const std::size_t j = clusters.index(nx, ny);
        if (!seen[j] && clusters[j] == label) {
          seen[j] = 1;
          stack.push_back(j);
        }
      });
    }
    if (component.size() >= static_cast<std::size_t>(p.min_area)) {
      for (std::size_t i : component) out[i] = next_id;
      ++next_id;
    }
  }
  return out;
}

LabelMap watershed_flood(const GrayImage& relief, const LabelMap& markers,
                         Connectivity connectivity) {
  require_same_shape(relief, markers, "watershed_flood");
  require_finite(relief, "watershed_flood relief");
  if (max_label(markers) == 0) fail(ErrorKind::invalid_argument, "watershed_flood: no markers");

  struct Entry {
    double key;
    std::uint64_t order;
    std::size_t index;
    bool operator>(const Entry& o) const {
      return key != o.key ? key > o.key : order > o.order;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  const int w = relief.width();
  LabelMap out = markers;
  std::vector<std::uint32_t> pending(markers.size(), 0);
  std::uint64_t order = 0;

  auto enqueue_neighbors = [&](std::size_t i) {
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for_each_neighbor(relief, x, y, connectivity, [&](int nx, int ny) {
      const std::size_t j = relief.index(nx, ny);
      if (out[j] == 0 && pending[j] == 0) {
        pending[j] = out[i];
        queue.push({relief[j], order++, j});
      }
    });
  };

  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (markers[i] != 0) enqueue_neighbors(i);
  }
  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    out[e.index] = pending[e.index];
    enqueue_neighbors(e.index);
  }
  return out;
}

Mask region_boundaries(const LabelMap& labels) {
  Mask out(labels.width(), labels.height());
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const std::uint32_t here = labels(x, y);
      for_each_neighbor(labels, x, y, Connectivity::four, [&](int nx, int ny) {
        if (labels(nx, ny) != here) out(x, y) = 1;
      });
    }
  }
  return out;
}

std::uint32_t max_label(const LabelMap& labels) noexcept {
  return *std::max_element(labels.pixels().begin(), labels.pixels().end());
}

}  // namespace glassseg
