#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glassseg/error.hpp"

namespace glassseg {

/// Dense row-major 2D grid. Dimensions are fixed at construction and are
/// always at least 1x1.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid(int width, int height, T fill = T{})
      : width_(checked_dim(width, "width")),
        height_(checked_dim(height, "height")),
        data_(static_cast<std::size_t>(width_) * height_, fill) {}

  Grid(int width, int height, std::vector<T> data)
      : width_(checked_dim(width, "width")),
        height_(checked_dim(height, "height")),
        data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * height_) {
      fail(ErrorKind::invalid_argument,
           "grid data holds " + std::to_string(data_.size()) +
               " values, expected " + std::to_string(width_) + "x" +
               std::to_string(height_));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static int checked_dim(int v, const char* name) {
    if (v < 1) {
      fail(ErrorKind::invalid_argument,
           std::string("grid ") + name + " must be >= 1, got " + std::to_string(v));
    }
    return v;
  }

  int width_;
  int height_;
  std::vector<T> data_;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Intensities nominally in [0,1].
using GrayImage = Grid<double>;
using RgbImage = Grid<Rgb>;
/// Nonzero marks an occluded (stain) pixel.
using Mask = Grid<std::uint8_t>;
/// 0 means unassigned.
using LabelMap = Grid<std::uint32_t>;

struct LumaWeights {
  double r = 0.299;
  double g = 0.587;
  double b = 0.114;
  friend bool operator==(const LumaWeights&, const LumaWeights&) = default;
};

GrayImage to_grayscale(const RgbImage& img, const LumaWeights& weights = {});

bool all_finite(const GrayImage& img) noexcept;

/// Throws ErrorKind::numeric naming `what` if any pixel is NaN or infinite.
void require_finite(const GrayImage& img, const std::string& what);

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    fail(ErrorKind::invalid_argument,
         std::string(what) + ": dimension mismatch " + std::to_string(a.width()) + "x" +
             std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
             std::to_string(b.height()));
  }
}

std::size_t count_set(const Mask& mask) noexcept;

enum class Connectivity { four = 4, eight = 8 };

/// Calls fn(nx, ny) for every in-bounds neighbor of (x, y), in raster order.
template <typename T, typename Fn>
void for_each_neighbor(const Grid<T>& g, int x, int y, Connectivity conn, Fn&& fn) {
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (conn == Connectivity::four && dx != 0 && dy != 0) continue;
      if (g.contains(x + dx, y + dy)) fn(x + dx, y + dy);
    }
  }
}

}  // namespace glassseg
