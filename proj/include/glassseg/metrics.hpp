#pragma once

#include <cstdint>
#include <set>

#include "glassseg/image.hpp"

namespace glassseg {

struct Metrics {
  double mse = 0.0;
  double psnr = 0.0;  // 10 log10(1 / mse), capped at kPsnrCap
  double iou = 0.0;
};

inline constexpr double kPsnrCap = 99.0;

/// Mean squared error over the set pixels of `region`; 0 for an empty region.
double mean_squared_error(const GrayImage& a, const GrayImage& b, const Mask& region);
double psnr_from_mse(double mse);
/// Intersection over union; two empty masks give 1.
double intersection_over_union(const Mask& a, const Mask& b);
/// Union of the listed labels as a binary mask.
Mask mask_of_labels(const LabelMap& labels, const std::set<std::uint32_t>& ids);

/// mse/psnr of `result` against `truth` over `error_region` (the stain mask),
/// iou of the selected regions against the ground-truth object mask.
Metrics compute_metrics(const GrayImage& result, const LabelMap& regions,
                        const std::set<std::uint32_t>& selected, const GrayImage& truth,
                        const Mask& truth_objects, const Mask& error_region);

}  // namespace glassseg
