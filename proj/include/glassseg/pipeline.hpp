#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "glassseg/diffusion.hpp"
#include "glassseg/gradient.hpp"
#include "glassseg/image.hpp"
#include "glassseg/kmeans.hpp"
#include "glassseg/laplace.hpp"
#include "glassseg/pnm.hpp"
#include "glassseg/tv_inpaint.hpp"
#include "glassseg/watershed.hpp"

namespace glassseg {

enum class KMeansInput { diffused_gradient, inpainted_gray };

enum class ObjectRule {
  /// Regions whose marker is brighter (mean inpainted intensity) than the
  /// midpoint between the darkest and brightest marker.
  brightest_markers,
  /// Regions whose marker came from the k-means cluster with the highest
  /// mean inpainted intensity.
  brightest_cluster,
};

struct PipelineConfig {
  LumaWeights luma;
  TvParams tv;
  GradientNorm gradient_norm = GradientNorm::euclidean;
  bool normalize_gradient = true;
  DiffusionParams diffusion;
  KMeansParams kmeans;
  int kmeans_restarts = 1;
  KMeansInput kmeans_input = KMeansInput::diffused_gradient;
  MarkerParams markers{20, Connectivity::four};
  /// Only this many clusters with the lowest centroids spawn markers;
  /// 0 lets every cluster spawn markers.
  int marker_clusters = 1;
  Connectivity flood_connectivity = Connectivity::four;
  LaplaceParams laplace{.tol = 1e-8, .max_iters = 10000, .omega = 1.95};
  ObjectRule object_rule = ObjectRule::brightest_markers;
  /// brightest_markers selects every region when the marker means span less
  /// than this.
  double min_object_contrast = 0.1;
  bool dump_stages = false;
  std::filesystem::path output_dir;

  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct StageRecord {
  std::string name;
  int iterations = 0;
  double objective = 0.0;
  double milliseconds = 0.0;
};

/// Every intermediate product, in stage order.
struct StageArtifacts {
  GrayImage gray{1, 1};
  TvResult inpaint{GrayImage(1, 1)};
  GrayImage gradient{1, 1};
  GrayImage diffused{1, 1};
  KMeansResult kmeans{LabelMap(1, 1)};
  LabelMap marker_source{1, 1};  // cluster map restricted to marker-spawning clusters
  LabelMap markers{1, 1};
  LabelMap regions{1, 1};
  std::set<std::uint32_t> objects;
  ComposeResult composite{GrayImage(1, 1), {GrayImage(1, 1)}};
};

struct PipelineResult {
  GrayImage final_image;
  LabelMap regions;
  StageArtifacts artifacts;
  std::vector<StageRecord> log;
  std::vector<std::string> warnings;
};

/// Runs grayscale -> TV inpainting -> Prewitt magnitude -> anisotropic
/// diffusion -> k-means -> markers -> watershed -> compositing.
/// Errors carry the failing stage name. With cfg.dump_stages and a non-empty
/// cfg.output_dir each stage is written as NN-stagename.pgm.
PipelineResult run_pipeline(const AnyImage& input, const Mask& stain_mask,
                            const PipelineConfig& cfg);

/// The stage's selection rule applied to finished regions.
std::set<std::uint32_t> select_objects(const GrayImage& inpainted, const KMeansResult& kmeans,
                                       const LabelMap& markers, const PipelineConfig& cfg);

/// Zeroes every cluster that is not among the `keep` lowest centroids
/// (keep = 0 keeps all).
LabelMap restrict_to_low_clusters(const KMeansResult& kmeans, int keep);

/// Stage dump names in order, e.g. "01-inpaint".
const std::vector<std::string>& stage_names();

void write_stage_dumps(const StageArtifacts& artifacts, const std::filesystem::path& dir);

/// One line per stage: name iterations objective milliseconds.
std::string format_stage_log(const std::vector<StageRecord>& log);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace glassseg
