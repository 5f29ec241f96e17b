#include "glassseg/tv_inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glassseg {
namespace {

constexpr int kMaxHalvings = 30;
constexpr double kStepGrowth = 1.1;

double fidelity(const GrayImage& u, const GrayImage& f, const Mask& mask) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!mask[i]) {
      const double r = u[i] - f[i];
      sum += r * r;
    }
  }
  return sum;
}

double total_variation(const GrayImage& u, double eps) {
  const int w = u.width();
  const int h = u.height();
  const double eps2 = eps * eps;
  double sum = 0.0;
  for (int y = 0; y < h; ++y) {
    const double* row = &u[u.index(0, y)];
    const double* next = y + 1 < h ? &u[u.index(0, y + 1)] : row;
    for (int x = 0; x < w; ++x) {
      const double dx = x + 1 < w ? row[x + 1] - row[x] : 0.0;
      const double dy = next[x] - row[x];
      sum += std::sqrt(dx * dx + dy * dy + eps2);
    }
  }
  return sum;
}

double energy(const GrayImage& u, const GrayImage& f, const Mask& mask, const TvParams& p) {
  return 0.5 * p.alpha * fidelity(u, f, mask) + total_variation(u, p.eps);
}

// Energy gradient: alpha * chi * (u - f) - div(grad u / |grad u|_eps), where
// div is the negative adjoint of the forward difference.
void energy_gradient(const GrayImage& u, const GrayImage& f, const Mask& mask,
                     const TvParams& p, GrayImage& px, GrayImage& py, GrayImage& grad) {
  const int w = u.width();
  const int h = u.height();
  const double eps2 = p.eps * p.eps;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = u(x, y);
      const double dx = x + 1 < w ? u(x + 1, y) - c : 0.0;
      const double dy = y + 1 < h ? u(x, y + 1) - c : 0.0;
      const double inv = 1.0 / std::sqrt(dx * dx + dy * dy + eps2);
      px(x, y) = dx * inv;
      py(x, y) = dy * inv;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double div = px(x, y) + py(x, y);
      if (x > 0) div -= px(x - 1, y);
      if (y > 0) div -= py(x, y - 1);
      const std::size_t i = u.index(x, y);
      const double fit = mask[i] ? 0.0 : p.alpha * (u[i] - f[i]);
      grad[i] = fit - div;
    }
  }
}

}  // namespace

void TvParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, "tv-inpaint: " + what); };
  if (!(alpha > 0.0)) bad("alpha must be > 0");
  if (!(eps > 0.0)) bad("eps must be > 0");
  if (!(dt > 0.0)) bad("dt must be > 0");
  if (max_iters < 1) bad("max_iters must be >= 1");
  if (!(tol >= 0.0)) bad("tol must be >= 0");
}

double tv_energy(const GrayImage& u, const GrayImage& f, const Mask& mask, const TvParams& p) {
  require_same_shape(u, f, "tv_energy");
  require_same_shape(u, mask, "tv_energy");
  return energy(u, f, mask, p);
}

GrayImage tv_energy_gradient(const GrayImage& u, const GrayImage& f, const Mask& mask,
                             const TvParams& p) {
  require_same_shape(u, f, "tv_energy_gradient");
  require_same_shape(u, mask, "tv_energy_gradient");
  GrayImage px(u.width(), u.height());
  GrayImage py(u.width(), u.height());
  GrayImage grad(u.width(), u.height());
  energy_gradient(u, f, mask, p, px, py, grad);
  return grad;
}

TvResult tv_inpaint(const GrayImage& f, const Mask& mask, const TvParams& p) {
  require_same_shape(f, mask, "tv_inpaint");
  p.validate();

  TvResult result{f, 0, 0.0, {}, 0, false, false};
  GrayImage& u = result.image;

  double known_sum = 0.0;
  std::size_t known = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) {
      known_sum += f[i];
      ++known;
    }
  }
  result.fully_masked = known == 0;
  const double fill = known ? known_sum / static_cast<double>(known) : 0.5;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mask[i]) u[i] = fill;
  }

  GrayImage px(f.width(), f.height());
  GrayImage py(f.width(), f.height());
  GrayImage grad(f.width(), f.height());
  GrayImage trial(f.width(), f.height());

  double e = energy(u, f, mask, p);
  result.energy_history.push_back(e);
  double dt = p.dt;

  for (int it = 0; it < p.max_iters; ++it) {
    energy_gradient(u, f, mask, p, px, py, grad);
    double e_trial = 0.0;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - dt * grad[i];
      e_trial = energy(trial, f, mask, p);
      if (e_trial <= e) {
        accepted = true;
        break;
      }
      if (halving < kMaxHalvings) {
        dt *= 0.5;
        ++result.halvings;
      }
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
    std::swap(u, trial);
    ++result.iterations;
    const double decrease = e > 0.0 ? (e - e_trial) / e : 0.0;
    e = e_trial;
    result.energy_history.push_back(e);
    if (decrease < p.tol) break;
    dt = std::min(dt * kStepGrowth, p.dt);
  }

  result.energy = e;
  require_finite(u, "tv_inpaint");
  return result;
}

}  // namespace glassseg
