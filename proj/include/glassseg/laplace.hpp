#pragma once

#include <cstdint>
#include <set>

#include "glassseg/image.hpp"

namespace glassseg {

struct LaplaceParams {
  double tol = 1e-8;  // max residual |n*phi - sum of neighbors|
  int max_iters = 10000;
  double omega = 1.8;  // SOR factor, 1 = plain Gauss-Seidel

  void validate() const;

  friend bool operator==(const LaplaceParams&, const LaplaceParams&) = default;
};

struct LaplaceResult {
  GrayImage image;
  double max_residual = 0.0;
  int sweeps = 0;        // largest sweep count over the components
  int components = 0;
  bool converged = true;  // false if some component hit max_iters
};

/// Replaces the pixels inside `region` with the discrete harmonic
/// interpolant of the values just outside it. Each 4-connected component of
/// the region is solved on its own by SOR sweeps in raster order, starting
/// from the mean of its boundary values. Where the region meets the image
/// border the missing neighbors drop out of the stencil (zero flux).
LaplaceResult laplace_fill(const GrayImage& img, const Mask& region, const LaplaceParams& p = {});

struct ComposeResult {
  GrayImage image;
  LaplaceResult fill;
};

/// Keeps the object regions verbatim and flattens every other region by
/// harmonic interpolation of its interior from that region's own boundary
/// pixels (the pixels touching a different region), which are left as is.
/// Selecting every label returns the original.
ComposeResult compose_output(const GrayImage& original, const LabelMap& regions,
                             const std::set<std::uint32_t>& object_ids,
                             const LaplaceParams& p = {});

}  // namespace glassseg
