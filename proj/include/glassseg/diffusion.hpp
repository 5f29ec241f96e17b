#pragma once

#include "glassseg/image.hpp"

namespace glassseg {

struct DiffusionParams {
  double k = 0.1;    // edge-stopping threshold
  double lam = 0.2;  // time step, (0, 0.25] for the explicit 4-neighbor scheme
  int iters = 15;

  void validate() const;

  friend bool operator==(const DiffusionParams&, const DiffusionParams&) = default;
};

/// exp(-(g/k)^2).
double diffusion_coefficient(double g, double k);

/// One explicit Perona-Malik step: I + lam * sum over N/S/E/W of c(|d|) * d,
/// with d the difference to that neighbor. Missing neighbors at the border
/// contribute no flux.
GrayImage diffuse_step(const GrayImage& img, const DiffusionParams& p);

/// Applies diffuse_step p.iters times.
GrayImage anisotropic_diffuse(const GrayImage& img, const DiffusionParams& p);

}  // namespace glassseg
