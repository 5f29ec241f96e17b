#include "glassseg/diffusion.hpp"

#include <cmath>
#include <string>

namespace glassseg {

void DiffusionParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, "diffusion: " + what); };
  if (!(k > 0.0)) bad("k must be > 0");
  if (!(lam > 0.0 && lam <= 0.25)) bad("lam must be in (0, 0.25]");
  if (iters < 0) bad("iters must be >= 0");
}

double diffusion_coefficient(double g, double k) {
  const double r = g / k;
  return std::exp(-r * r);
}

GrayImage diffuse_step(const GrayImage& img, const DiffusionParams& p) {
  p.validate();
  const int w = img.width();
  const int h = img.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = img(x, y);
      double flux = 0.0;
      auto add = [&](int nx, int ny) {
        const double d = img(nx, ny) - c;
        flux += diffusion_coefficient(std::abs(d), p.k) * d;
      };
      if (y > 0) add(x, y - 1);
      if (y + 1 < h) add(x, y + 1);
      if (x + 1 < w) add(x + 1, y);
      if (x > 0) add(x - 1, y);
      out(x, y) = c + p.lam * flux;
    }
  }
  return out;
}

GrayImage anisotropic_diffuse(const GrayImage& img, const DiffusionParams& p) {
  p.validate();
  GrayImage cur = img;
  for (int i = 0; i < p.iters; ++i) cur = diffuse_step(cur, p);
  return cur;
}

}  // namespace glassseg
