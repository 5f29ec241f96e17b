#include "glassseg/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace glassseg {

GrayImage prewitt_gradient_magnitude(const GrayImage& img, GradientNorm norm) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, w - 1);
      const double gx = (img(xp, ym) - img(xm, ym)) + (img(xp, y) - img(xm, y)) +
                        (img(xp, yp) - img(xm, yp));
      const double gy = (img(xm, yp) - img(xm, ym)) + (img(x, yp) - img(x, ym)) +
                        (img(xp, yp) - img(xp, ym));
      out(x, y) = norm == GradientNorm::euclidean ? std::sqrt(gx * gx + gy * gy)
                                                  : std::abs(gx) + std::abs(gy);
    }
  }
  return out;
}

GrayImage normalize_to_unit(const GrayImage& img) {
  const double top = *std::max_element(img.pixels().begin(), img.pixels().end());
  if (!(top > 0.0)) return img;
  GrayImage out = img;
  for (double& v : out.pixels()) v /= top;
  return out;
}

}  // namespace glassseg
