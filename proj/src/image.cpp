#include "glassseg/image.hpp"

#include <algorithm>
#include <cmath>

namespace glassseg {

GrayImage to_grayscale(const RgbImage& img, const LumaWeights& weights) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb& p = img[i];
    out[i] = weights.r * p.r + weights.g * p.g + weights.b * p.b;
  }
  return out;
}

bool all_finite(const GrayImage& img) noexcept {
  return std::all_of(img.pixels().begin(), img.pixels().end(),
                     [](double v) { return std::isfinite(v); });
}

void require_finite(const GrayImage& img, const std::string& what) {
  if (!all_finite(img)) fail(ErrorKind::numeric, what + ": non-finite value encountered");
}

std::size_t count_set(const Mask& mask) noexcept {
  return static_cast<std::size_t>(
      std::count_if(mask.pixels().begin(), mask.pixels().end(), [](auto v) { return v != 0; }));
}

}  // namespace glassseg
