#include "glassseg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>

namespace glassseg {
namespace {

template <typename Fn>
auto run_stage(const std::string& name, std::vector<StageRecord>& log, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto out = fn();
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    log.push_back({name, out.second, out.first, ms.count()});
  } catch (const Error& e) {
    throw Error(e.kind(), "stage " + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::numeric, "stage " + name + ": " + e.what());
  }
}

double total(const GrayImage& img) {
  return std::accumulate(img.pixels().begin(), img.pixels().end(), 0.0);
}

}  // namespace

void PipelineConfig::validate() const {
  tv.validate();
  diffusion.validate();
  kmeans.validate();
  markers.validate();
  laplace.validate();
  if (kmeans_restarts < 1) fail(ErrorKind::config, "kmeans: restarts must be >= 1");
  if (marker_clusters < 0) fail(ErrorKind::config, "watershed: marker_clusters must be >= 0");
  if (!(min_object_contrast >= 0.0)) fail(ErrorKind::config, "laplace: min_object_contrast must be >= 0");
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {
      "00-grayscale", "01-inpaint", "02-gradient", "03-diffusion",
      "04-kmeans",    "05-markers", "06-watershed", "07-composite"};
  return names;
}

LabelMap restrict_to_low_clusters(const KMeansResult& kmeans, int keep) {
  LabelMap out = kmeans.labels;
  if (keep <= 0 || keep >= static_cast<int>(kmeans.centroids.size())) return out;
  std::vector<std::size_t> order(kmeans.centroids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return kmeans.centroids[a] < kmeans.centroids[b];
  });
  std::vector<bool> kept(order.size(), false);
  for (int r = 0; r < keep; ++r) kept[order[static_cast<std::size_t>(r)]] = true;
  for (std::uint32_t& l : out.pixels()) {
    if (!kept[l - 1]) l = 0;
  }
  return out;
}

std::set<std::uint32_t> select_objects(const GrayImage& inpainted, const KMeansResult& kmeans,
                                       const LabelMap& markers, const PipelineConfig& cfg) {
  require_same_shape(inpainted, markers, "select_objects");
  const std::uint32_t count = max_label(markers);
  std::vector<double> marker_sum(count + 1, 0.0);
  std::vector<std::size_t> marker_n(count + 1, 0);
  std::vector<std::uint32_t> marker_cluster(count + 1, 0);
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const std::uint32_t m = markers[i];
    if (!m) continue;
    marker_sum[m] += inpainted[i];
    ++marker_n[m];
    marker_cluster[m] = kmeans.labels[i];
  }

  std::set<std::uint32_t> ids;
  if (cfg.object_rule == ObjectRule::brightest_markers) {
    std::vector<double> mean(count + 1, 0.0);
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (std::uint32_t m = 1; m <= count; ++m) {
      if (!marker_n[m]) continue;
      mean[m] = marker_sum[m] / static_cast<double>(marker_n[m]);
      lo = first ? mean[m] : std::min(lo, mean[m]);
      hi = first ? mean[m] : std::max(hi, mean[m]);
      first = false;
    }
    const bool flat = hi - lo < cfg.min_object_contrast;
    const double cut = 0.5 * (lo + hi);
    for (std::uint32_t m = 1; m <= count; ++m) {
      if (marker_n[m] && (flat || mean[m] > cut)) ids.insert(m);
    }
    return ids;
  }

  // brightest_cluster: among clusters that spawned a marker.
  std::map<std::uint32_t, std::pair<double, std::size_t>> cluster_stats;
  for (std::uint32_t m = 1; m <= count; ++m) {
    if (marker_n[m]) cluster_stats[marker_cluster[m]] = {0.0, 0};
  }
  for (std::size_t i = 0; i < inpainted.size(); ++i) {
    auto it = cluster_stats.find(kmeans.labels[i]);
    if (it == cluster_stats.end()) continue;
    it->second.first += inpainted[i];
    ++it->second.second;
  }
  std::uint32_t best = 0;
  double best_mean = 0.0;
  for (const auto& [cluster, stat] : cluster_stats) {
    const double mean = stat.first / static_cast<double>(stat.second);
    if (best == 0 || mean > best_mean) {
      best = cluster;
      best_mean = mean;
    }
  }
  for (std::uint32_t m = 1; m <= count; ++m) {
    if (marker_n[m] && marker_cluster[m] == best) ids.insert(m);
  }
  return ids;
}

PipelineResult run_pipeline(const AnyImage& input, const Mask& stain_mask,
                            const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult result{GrayImage(1, 1), LabelMap(1, 1), {}, {}, {}};
  StageArtifacts& a = result.artifacts;
  std::vector<StageRecord>& log = result.log;
  const auto& names = stage_names();
  auto name = [&](int i) { return names[static_cast<std::size_t>(i)].substr(3); };

  run_stage(name(0), log, [&] {
    if (const auto* gray = std::get_if<GrayImage>(&input)) {
      a.gray = *gray;
    } else {
      a.gray = to_grayscale(std::get<RgbImage>(input), cfg.luma);
    }
    require_same_shape(a.gray, stain_mask, "stain mask");
    require_finite(a.gray, "input");
    return std::pair{total(a.gray) / static_cast<double>(a.gray.size()), 1};
  });

  run_stage(name(1), log, [&] {
    a.inpaint = tv_inpaint(a.gray, stain_mask, cfg.tv);
    if (a.inpaint.fully_masked) result.warnings.push_back("inpaint: every pixel is masked");
    if (a.inpaint.stalled) result.warnings.push_back("inpaint: step size underflow, stopped early");
    return std::pair{a.inpaint.energy, a.inpaint.iterations};
  });

  run_stage(name(2), log, [&] {
    GrayImage magnitude = prewitt_gradient_magnitude(a.inpaint.image, cfg.gradient_norm);
    const double peak = *std::max_element(magnitude.pixels().begin(), magnitude.pixels().end());
    a.gradient = cfg.normalize_gradient ? normalize_to_unit(magnitude) : std::move(magnitude);
    require_finite(a.gradient, "gradient");
    return std::pair{peak, 1};
  });

  run_stage(name(3), log, [&] {
    a.diffused = anisotropic_diffuse(a.gradient, cfg.diffusion);
    require_finite(a.diffused, "diffusion");
    return std::pair{total(a.diffused), cfg.diffusion.iters};
  });

  run_stage(name(4), log, [&] {
    const GrayImage& features =
        cfg.kmeans_input == KMeansInput::diffused_gradient ? a.diffused : a.inpaint.image;
    a.kmeans = kmeans_best_of(features, cfg.kmeans, cfg.kmeans_restarts);
    if (a.kmeans.iterations >= cfg.kmeans.max_iters) {
      result.warnings.push_back("kmeans: reached max_iters");
    }
    return std::pair{a.kmeans.objective, a.kmeans.iterations};
  });

  run_stage(name(5), log, [&] {
    a.marker_source = restrict_to_low_clusters(a.kmeans, cfg.marker_clusters);
    a.markers = markers_from_clusters(a.marker_source, cfg.markers);
    return std::pair{static_cast<double>(max_label(a.markers)), 1};
  });

  run_stage(name(6), log, [&] {
    a.regions = watershed_flood(a.diffused, a.markers, cfg.flood_connectivity);
    return std::pair{static_cast<double>(max_label(a.regions)), 1};
  });

  run_stage(name(7), log, [&] {
    a.objects = select_objects(a.inpaint.image, a.kmeans, a.markers, cfg);
    a.composite = compose_output(a.gray, a.regions, a.objects, cfg.laplace);
    if (!a.composite.fill.converged) result.warnings.push_back("composite: laplace hit max_iters");
    require_finite(a.composite.image, "composite");
    return std::pair{a.composite.fill.max_residual, a.composite.fill.sweeps};
  });

  result.final_image = a.composite.image;
  result.regions = a.regions;

  if (cfg.dump_stages && !cfg.output_dir.empty()) write_stage_dumps(a, cfg.output_dir);
  return result;
}

void write_stage_dumps(const StageArtifacts& a, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  const auto& names = stage_names();
  auto path = [&](int i) { return dir / (names[static_cast<std::size_t>(i)] + ".pgm"); };
  write_file(path(0), encode_pgm(a.gray));
  write_file(path(1), encode_pgm(a.inpaint.image));
  write_file(path(2), encode_pgm(a.gradient));
  write_file(path(3), encode_pgm(a.diffused));
  write_file(path(4), encode_label_pgm(a.kmeans.labels));
  write_file(path(5), encode_label_pgm(a.markers));
  write_file(path(6), encode_label_pgm(a.regions));
  write_file(path(7), encode_pgm(a.composite.image));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_stage_log(const std::vector<StageRecord>& log) {
  std::string out;
  for (const StageRecord& r : log) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.milliseconds);
    out += r.name + " " + std::to_string(r.iterations) + " " + format_double(r.objective) + " " +
           ms + "\n";
  }
  return out;
}

}  // namespace glassseg
