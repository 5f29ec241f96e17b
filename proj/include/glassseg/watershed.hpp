#pragma once

#include "glassseg/image.hpp"

namespace glassseg {

struct MarkerParams {
  int min_area = 1;
  Connectivity connectivity = Connectivity::four;

  void validate() const;

  friend bool operator==(const MarkerParams&, const MarkerParams&) = default;
};

/// Every connected component of every nonzero cluster label with at least
/// min_area pixels becomes a marker. Ids are 1, 2, ... in raster order of each
/// component's first pixel; dropped components and label-0 pixels map to 0.
LabelMap markers_from_clusters(const LabelMap& clusters, const MarkerParams& p = {});

/// Marker-controlled priority flood. Pixels are popped in order of relief
/// value, FIFO among equal values, seeded by scanning marker pixels in raster
/// order. A pixel takes the label of the neighbor that first enqueued it.
/// Every pixel is labeled on return; marker pixels keep their labels.
LabelMap watershed_flood(const GrayImage& relief, const LabelMap& markers,
                         Connectivity connectivity = Connectivity::four);

/// Pixels with a 4-neighbor carrying a different label.
Mask region_boundaries(const LabelMap& labels);

/// Largest label value present.
std::uint32_t max_label(const LabelMap& labels) noexcept;

}  // namespace glassseg
