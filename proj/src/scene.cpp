#include "glassseg/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace glassseg {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

bool inside(const ObjectShape& s, double px, double py) {
  const double dx = (px - s.cx) / s.half_w;
  const double dy = (py - s.cy) / s.half_h;
  if (s.kind == ShapeKind::rectangle) return std::abs(dx) < 1.0 && std::abs(dy) < 1.0;
  return dx * dx + dy * dy < 1.0;
}

bool inside(const StainBlob& b, double px, double py) {
  const double dx = px - b.cx;
  const double dy = py - b.cy;
  const double r = b.radius * (1.0 + b.wobble * std::sin(3.0 * std::atan2(dy, dx) + b.phase));
  return dx * dx + dy * dy < r * r;
}

bool in_bounds(const ObjectShape& s, int w, int h) {
  return s.half_w > 0.0 && s.half_h > 0.0 && s.cx - s.half_w >= 0.0 && s.cy - s.half_h >= 0.0 &&
         s.cx + s.half_w <= w && s.cy + s.half_h <= h;
}

bool in_bounds(const StainBlob& b, int w, int h) {
  const double reach = b.radius * (1.0 + std::abs(b.wobble));
  return b.radius > 0.0 && b.cx - reach >= 0.0 && b.cy - reach >= 0.0 && b.cx + reach <= w &&
         b.cy + reach <= h;
}

template <typename Shape>
Mask rasterize(const Shape& s, int w, int h) {
  Mask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m(x, y) = inside(s, x + 0.5, y + 0.5);
  }
  return m;
}

}  // namespace

void SceneSpec::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, "scene: " + what); };
  if (width < 1 || height < 1) bad("width and height must be >= 1");
  if (random_objects < 0 || random_stains < 0) bad("random counts must be >= 0");
  if (!(object_min_size > 0.0 && object_min_size <= object_max_size)) bad("invalid object size range");
  if (!(stain_min_radius > 0.0 && stain_min_radius <= stain_max_radius)) bad("invalid stain radius range");
  if (stain_edge_clearance < 0) bad("stain_edge_clearance must be >= 0");
  if (!(max_stain_coverage >= 0.0 && max_stain_coverage <= 1.0)) bad("max_stain_coverage must be in [0,1]");
  if (!(max_object_stain_fraction >= 0.0 && max_object_stain_fraction <= 1.0)) {
    bad("max_object_stain_fraction must be in [0,1]");
  }
}

Scene generate_synthetic_scene(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  for (const ObjectShape& s : spec.objects) {
    if (!in_bounds(s, w, h)) fail(ErrorKind::invalid_argument, "scene: object out of bounds");
  }
  for (const StainBlob& b : spec.stains) {
    if (!in_bounds(b, w, h)) fail(ErrorKind::invalid_argument, "scene: stain out of bounds");
  }

  Rng rng(spec.seed);

  // Objects: explicit first, then random placements that keep a gap of 4 px.
  std::vector<ObjectShape> objects = spec.objects;
  for (int n = 0; n < spec.random_objects; ++n) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      ObjectShape s;
      s.kind = rng.uniform() < 0.5 ? ShapeKind::ellipse : ShapeKind::rectangle;
      s.half_w = rng.uniform(spec.object_min_size, spec.object_max_size);
      s.half_h = rng.uniform(spec.object_min_size, spec.object_max_size);
      s.cx = rng.uniform(s.half_w + 2.0, w - s.half_w - 2.0);
      s.cy = rng.uniform(s.half_h + 2.0, h - s.half_h - 2.0);
      s.intensity = rng.uniform(spec.object_intensity_lo, spec.object_intensity_hi);
      if (!in_bounds(s, w, h)) continue;
      const bool overlaps = std::any_of(objects.begin(), objects.end(), [&](const ObjectShape& o) {
        return std::abs(o.cx - s.cx) < o.half_w + s.half_w + 4.0 &&
               std::abs(o.cy - s.cy) < o.half_h + s.half_h + 4.0;
      });
      if (overlaps) continue;
      objects.push_back(s);
      break;
    }
  }

  Scene scene{GrayImage(w, h), GrayImage(w, h), Mask(w, h), Mask(w, h)};

  // Smooth background texture from a few random plane waves.
  struct Wave {
    double fx, fy, phase;
  };
  std::vector<Wave> waves(3);
  for (Wave& wv : waves) {
    wv.fx = rng.uniform(-0.12, 0.12);
    wv.fy = rng.uniform(-0.12, 0.12);
    wv.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double t = 0.0;
      for (const Wave& wv : waves) t += std::sin(wv.fx * x + wv.fy * y + wv.phase);
      scene.clean(x, y) = spec.background + spec.texture_amplitude * t / 3.0;
    }
  }

  std::vector<Mask> object_masks;
  for (const ObjectShape& s : objects) {
    Mask m = rasterize(s, w, h);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) {
        scene.clean[i] = s.intensity;
        scene.objects[i] = 1;
      }
    }
    object_masks.push_back(std::move(m));
  }
  for (double& v : scene.clean.pixels()) {
    v = std::clamp(v + spec.noise_amplitude * rng.uniform(-1.0, 1.0), 0.0, 1.0);
  }

  // Stains: explicit first, then random blobs subject to the coverage limits.
  std::vector<StainBlob> stains = spec.stains;
  std::vector<std::size_t> object_hits(object_masks.size(), 0);
  std::size_t covered = 0;
  // Pixels within stain_edge_clearance of an object outline.
  Mask near_edge(w, h);
  if (spec.stain_edge_clearance > 0) {
    const int r = spec.stain_edge_clearance;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool edge = false;
        for_each_neighbor(scene.objects, x, y, Connectivity::four, [&](int nx, int ny) {
          edge = edge || scene.objects(nx, ny) != scene.objects(x, y);
        });
        if (!edge) continue;
        for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) {
          for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) near_edge(xx, yy) = 1;
        }
      }
    }
  }
  auto accept = [&](const Mask& m, bool enforce) {
    if (enforce && spec.stain_edge_clearance > 0) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] && near_edge[i]) return false;
      }
    }
    std::size_t added = 0;
    std::vector<std::size_t> hits(object_masks.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i] || scene.stains[i]) continue;
      ++added;
      for (std::size_t o = 0; o < object_masks.size(); ++o) hits[o] += object_masks[o][i];
    }
    if (enforce) {
      if (static_cast<double>(covered + added) > spec.max_stain_coverage * m.size()) return false;
      for (std::size_t o = 0; o < object_masks.size(); ++o) {
        const double area = static_cast<double>(count_set(object_masks[o]));
        if (static_cast<double>(object_hits[o] + hits[o]) > spec.max_object_stain_fraction * area) {
          return false;
        }
      }
    }
    covered += added;
    for (std::size_t o = 0; o < object_masks.size(); ++o) object_hits[o] += hits[o];
    for (std::size_t i = 0; i < m.size(); ++i) scene.stains[i] |= m[i];
    return true;
  };

  std::vector<std::pair<StainBlob, Mask>> placed;
  for (const StainBlob& b : stains) {
    Mask m = rasterize(b, w, h);
    accept(m, false);
    placed.emplace_back(b, std::move(m));
  }
  for (int n = 0; n < spec.random_stains; ++n) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      StainBlob b;
      b.radius = rng.uniform(spec.stain_min_radius, spec.stain_max_radius);
      b.wobble = rng.uniform(0.1, 0.35);
      b.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double reach = b.radius * (1.0 + b.wobble);
      b.cx = rng.uniform(reach, w - reach);
      b.cy = rng.uniform(reach, h - reach);
      b.intensity = rng.uniform() < 0.5 ? rng.uniform(0.0, 0.1) : rng.uniform(0.55, 0.95);
      b.opacity = rng.uniform(0.6, 0.9);
      if (!in_bounds(b, w, h)) continue;
      Mask m = rasterize(b, w, h);
      if (!accept(m, true)) continue;
      placed.emplace_back(b, std::move(m));
      break;
    }
  }

  scene.image = scene.clean;
  for (const auto& [b, m] : placed) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      const double v = (1.0 - b.opacity) * scene.clean[i] + b.opacity * b.intensity;
      scene.image[i] = v;
    }
  }
  for (std::size_t i = 0; i < scene.image.size(); ++i) {
    if (scene.stains[i]) {
      scene.image[i] =
          std::clamp(scene.image[i] + spec.stain_clutter * rng.uniform(-1.0, 1.0), 0.0, 1.0);
    }
  }
  return scene;
}

std::vector<SceneSpec> easy_scene_specs() {
  std::vector<SceneSpec> specs;
  const int object_counts[] = {1, 2, 3, 2, 3};
  for (int i = 0; i < 5; ++i) {
    SceneSpec s;
    s.width = 128;
    s.height = 128;
    s.random_objects = object_counts[i];
    s.random_stains = 6;
    s.stain_edge_clearance = 2;
    s.seed = 1000 + static_cast<std::uint64_t>(i);
    specs.push_back(s);
  }
  return specs;
}

}  // namespace glassseg
