#pragma once

#include <cstdint>
#include <vector>

#include "glassseg/image.hpp"

namespace glassseg {

struct KMeansParams {
  int k_clusters = 5;
  int max_iters = 300;
  double tol = 1e-9;  // stop once no centroid moves by more than this
  std::uint64_t seed = 1;
  bool refine = true;  // single-pixel moves after Lloyd converges

  void validate() const;

  friend bool operator==(const KMeansParams&, const KMeansParams&) = default;
};

struct KMeansResult {
  LabelMap labels;  // 1..K, label j+1 belongs to centroids[j]
  std::vector<double> centroids{};
  double objective = 0.0;  // sum of squared distance to the assigned centroid
  int iterations = 0;
  std::vector<double> objective_history{};  // objective after every iteration
};

/// Lloyd iteration on scalar intensities with k-means++ seeding. Ties go to
/// the lowest centroid index. A cluster that ends an iteration empty has its
/// centroid moved onto the pixel farthest from its own centroid. With
/// p.refine, a converged solution is polished by moving single pixels between
/// clusters while that lowers the objective, then Lloyd resumes; this repeats
/// until neither step changes anything.
/// Throws ErrorKind::invalid_argument when K exceeds the pixel count.
KMeansResult kmeans_cluster(const GrayImage& img, const KMeansParams& p = {});

/// Runs `restarts` solves with seeds p.seed, p.seed + 1, ... and keeps the one
/// with the lowest objective (earliest on ties).
KMeansResult kmeans_best_of(const GrayImage& img, const KMeansParams& p, int restarts);

/// sum of (x - centroid(label))^2 for an arbitrary labeling.
double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        const std::vector<double>& centroids);

}  // namespace glassseg
