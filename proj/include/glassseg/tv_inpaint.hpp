#pragma once

#include <vector>

#include "glassseg/image.hpp"

namespace glassseg {

struct TvParams {
  double alpha = 50.0;   // fidelity weight on unmasked pixels
  double eps = 1e-2;     // smoothing of |grad u| near zero
  double dt = 0.1;       // initial (and maximum) descent step
  int max_iters = 2000;
  double tol = 1e-6;     // stop once the relative energy decrease drops below this

  /// Throws ErrorKind::config when a field is out of range.
  void validate() const;

  friend bool operator==(const TvParams&, const TvParams&) = default;
};

/// (alpha/2) * sum over unmasked pixels of (u - f)^2
///   + sum over all pixels of sqrt(Dx(u)^2 + Dy(u)^2 + eps^2),
/// with forward differences that vanish on the last column/row.
double tv_energy(const GrayImage& u, const GrayImage& f, const Mask& mask, const TvParams& p);

/// Exact gradient of tv_energy with respect to u.
GrayImage tv_energy_gradient(const GrayImage& u, const GrayImage& f, const Mask& mask,
                             const TvParams& p);

struct TvResult {
  GrayImage image;
  int iterations = 0;
  double energy = 0.0;
  /// Energy of the initial guess followed by the energy after every accepted step.
  std::vector<double> energy_history{};
  /// Total number of step halvings over the solve.
  int halvings = 0;
  /// The last step could not decrease the energy after the maximum number of halvings.
  bool stalled = false;
  /// Every pixel was masked: there is no fidelity anchor.
  bool fully_masked = false;
};

/// Explicit gradient descent on tv_energy. Masked pixels start at the mean of
/// the unmasked pixels (0.5 when everything is masked). A step that would
/// raise the energy is retried with half the step size, up to 30 times; after
/// an accepted step the step size grows by 10% again, capped at p.dt.
TvResult tv_inpaint(const GrayImage& f, const Mask& mask, const TvParams& p = {});

}  // namespace glassseg
