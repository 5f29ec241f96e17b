#pragma once

#include <cstdint>
#include <vector>

#include "glassseg/image.hpp"

namespace glassseg {

enum class ShapeKind { ellipse, rectangle };

/// Axis-aligned ellipse or rectangle in pixel coordinates; pixel (x, y) is
/// sampled at (x + 0.5, y + 0.5) and belongs to the shape when strictly inside.
struct ObjectShape {
  ShapeKind kind = ShapeKind::ellipse;
  double cx = 0.0;
  double cy = 0.0;
  double half_w = 1.0;
  double half_h = 1.0;
  double intensity = 0.8;
};

/// Irregular blob: radius(theta) = radius * (1 + wobble * sin(3 theta + phase)).
/// Covered pixels become (1 - opacity) * clean + opacity * intensity plus
/// uniform clutter noise.
struct StainBlob {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 4.0;
  double intensity = 0.05;
  double opacity = 0.8;
  double wobble = 0.25;
  double phase = 0.0;
};

struct SceneSpec {
  int width = 128;
  int height = 128;
  double background = 0.2;
  double texture_amplitude = 0.03;  // smooth low-frequency background texture
  double noise_amplitude = 0.01;    // per-pixel uniform noise on the clean image
  double stain_clutter = 0.04;      // per-pixel uniform noise inside stains

  std::vector<ObjectShape> objects;
  std::vector<StainBlob> stains;

  // Randomly placed shapes, added after the explicit ones.
  int random_objects = 0;
  double object_min_size = 10.0;  // half extent range
  double object_max_size = 18.0;
  double object_intensity_lo = 0.75;
  double object_intensity_hi = 0.9;
  int random_stains = 0;
  double stain_min_radius = 3.0;
  double stain_max_radius = 8.0;
  double max_stain_coverage = 0.15;         // fraction of all pixels
  double max_object_stain_fraction = 0.2;   // fraction of any one object
  int stain_edge_clearance = 0;             // random stains keep this distance from object outlines

  std::uint64_t seed = 1;

  void validate() const;
};

struct Scene {
  GrayImage clean;   // before stains
  GrayImage image;   // with stains
  Mask objects;      // ground-truth object pixels
  Mask stains;       // stain pixels, the inpainting domain
};

/// Deterministic from spec.seed. Explicit shapes that leave the image are an
/// ErrorKind::invalid_argument error; random stains that would exceed the
/// coverage limits are redrawn a bounded number of times and then skipped.
Scene generate_synthetic_scene(const SceneSpec& spec);

/// The five fixed "easy" scenes used by the end-to-end checks: 128x128,
/// one to three high-contrast objects, stains within the coverage limits.
std::vector<SceneSpec> easy_scene_specs();

}  // namespace glassseg
