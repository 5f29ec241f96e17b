#include "glassseg/laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "glassseg/watershed.hpp"

namespace glassseg {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Cell {
  std::size_t index;
  std::array<std::size_t, 4> nbr;
  int count;
};

std::vector<std::vector<Cell>> region_components(const Mask& region) {
  const int w = region.width();
  std::vector<std::uint8_t> seen(region.size(), 0);
  std::vector<std::vector<Cell>> components;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < region.size(); ++start) {
    if (!region[start] || seen[start]) continue;
    std::vector<std::size_t> members;
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      members.push_back(i);
      for_each_neighbor(region, static_cast<int>(i % w), static_cast<int>(i / w),
                        Connectivity::four, [&](int nx, int ny) {
                          const std::size_t j = region.index(nx, ny);
                          if (region[j] && !seen[j]) {
                            seen[j] = 1;
                            stack.push_back(j);
                          }
                        });
    }
    std::sort(members.begin(), members.end());
    std::vector<Cell> cells;
    cells.reserve(members.size());
    for (std::size_t i : members) {
      Cell c{i, {kNone, kNone, kNone, kNone}, 0};
      for_each_neighbor(region, static_cast<int>(i % w), static_cast<int>(i / w),
                        Connectivity::four,
                        [&](int nx, int ny) { c.nbr[c.count++] = region.index(nx, ny); });
      cells.push_back(c);
    }
    components.push_back(std::move(cells));
  }
  return components;
}

double residual(const std::vector<double>& v, const Cell& c) {
  double s = 0.0;
  for (int k = 0; k < c.count; ++k) s += v[c.nbr[k]];
  return std::abs(c.count * v[c.index] - s);
}

}  // namespace

void LaplaceParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, "laplace: " + what); };
  if (!(tol > 0.0)) bad("tol must be > 0");
  if (max_iters < 1) bad("max_iters must be >= 1");
  if (!(omega >= 1.0 && omega < 2.0)) bad("omega must be in [1, 2)");
}

LaplaceResult laplace_fill(const GrayImage& img, const Mask& region, const LaplaceParams& p) {
  require_same_shape(img, region, "laplace_fill");
  p.validate();
  if (count_set(region) == img.size()) {
    fail(ErrorKind::invalid_argument, "laplace_fill: region covers the whole image");
  }

  std::vector<double> v(img.pixels().begin(), img.pixels().end());
  LaplaceResult result{img, 0.0, 0, 0, true};

  for (const std::vector<Cell>& cells : region_components(region)) {
    ++result.components;
    double boundary_sum = 0.0;
    std::size_t boundary_count = 0;
    for (const Cell& c : cells) {
      for (int k = 0; k < c.count; ++k) {
        if (!region[c.nbr[k]]) {
          boundary_sum += v[c.nbr[k]];
          ++boundary_count;
        }
      }
    }
    if (boundary_count == 0) {
      fail(ErrorKind::invalid_argument, "laplace_fill: region component has no outside neighbor");
    }
    const double init = boundary_sum / static_cast<double>(boundary_count);
    for (const Cell& c : cells) v[c.index] = init;

    int sweeps = 0;
    double max_res = 0.0;
    for (const Cell& c : cells) max_res = std::max(max_res, residual(v, c));
    bool done = max_res <= p.tol;
    while (!done && sweeps < p.max_iters) {
      ++sweeps;
      // Residual of the pre-update values; a cheap upper estimate for the
      // convergence check, confirmed by an exact pass below.
      double sweep_res = 0.0;
      for (const Cell& c : cells) {
        double s = 0.0;
        for (int k = 0; k < c.count; ++k) s += v[c.nbr[k]];
        const double r = s - c.count * v[c.index];
        sweep_res = std::max(sweep_res, std::abs(r));
        v[c.index] += p.omega * r / c.count;
      }
      if (sweep_res <= p.tol) {
        max_res = 0.0;
        for (const Cell& c : cells) max_res = std::max(max_res, residual(v, c));
        done = max_res <= p.tol;
      }
    }
    if (!done) {
      max_res = 0.0;
      for (const Cell& c : cells) max_res = std::max(max_res, residual(v, c));
      result.converged = false;
    }
    result.sweeps = std::max(result.sweeps, sweeps);
    result.max_residual = std::max(result.max_residual, max_res);
  }

  result.image = GrayImage(img.width(), img.height(), std::move(v));
  return result;
}

ComposeResult compose_output(const GrayImage& original, const LabelMap& regions,
                             const std::set<std::uint32_t>& object_ids, const LaplaceParams& p) {
  require_same_shape(original, regions, "compose_output");
  std::set<std::uint32_t> present(regions.pixels().begin(), regions.pixels().end());
  for (std::uint32_t id : object_ids) {
    if (!present.contains(id)) {
      fail(ErrorKind::invalid_argument,
           "compose_output: object id " + std::to_string(id) + " not present in region map");
    }
  }

  const Mask edges = region_boundaries(regions);
  Mask fill(original.width(), original.height());
  for (std::size_t i = 0; i < fill.size(); ++i) {
    fill[i] = !object_ids.contains(regions[i]) && !edges[i];
  }
  if (count_set(fill) == 0) {
    return {original, LaplaceResult{original, 0.0, 0, 0, true}};
  }
  LaplaceResult filled = laplace_fill(original, fill, p);
  GrayImage image = filled.image;
  return {std::move(image), std::move(filled)};
}

}  // namespace glassseg
