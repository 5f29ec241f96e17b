#include "glassseg/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace glassseg {

double mean_squared_error(const GrayImage& a, const GrayImage& b, const Mask& region) {
  require_same_shape(a, b, "mean_squared_error");
  require_same_shape(a, region, "mean_squared_error");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!region[i]) continue;
    const double d = a[i] - b[i];
    sum += d * d;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double intersection_over_union(const Mask& a, const Mask& b) {
  require_same_shape(a, b, "intersection_over_union");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] != 0;
    const bool y = b[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

Mask mask_of_labels(const LabelMap& labels, const std::set<std::uint32_t>& ids) {
  Mask m(labels.width(), labels.height());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = ids.contains(labels[i]);
  return m;
}

Metrics compute_metrics(const GrayImage& result, const LabelMap& regions,
                        const std::set<std::uint32_t>& selected, const GrayImage& truth,
                        const Mask& truth_objects, const Mask& error_region) {
  require_same_shape(result, regions, "compute_metrics");
  require_same_shape(result, truth, "compute_metrics");
  require_same_shape(result, truth_objects, "compute_metrics");
  Metrics m;
  m.mse = mean_squared_error(result, truth, error_region);
  m.psnr = psnr_from_mse(m.mse);
  m.iou = intersection_over_union(mask_of_labels(regions, selected), truth_objects);
  return m;
}

}  // namespace glassseg
