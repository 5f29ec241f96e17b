#pragma once

#include "glassseg/image.hpp"

namespace glassseg {

enum class GradientNorm {
  euclidean,     // sqrt(gx^2 + gy^2)
  absolute_sum,  // |gx| + |gy|
};

/// Unnormalized 3x3 Prewitt derivatives combined per `norm`. Borders use
/// clamp-to-edge padding, so the output has the input's dimensions.
GrayImage prewitt_gradient_magnitude(const GrayImage& img,
                                     GradientNorm norm = GradientNorm::euclidean);

/// Divides by the maximum value; an all-zero image is returned unchanged.
GrayImage normalize_to_unit(const GrayImage& img);

}  // namespace glassseg
