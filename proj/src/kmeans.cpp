#include "glassseg/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace glassseg {
namespace {

// mt19937_64 is fully specified by the standard; the distributions are not,
// so uniform draws are built from the raw bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> seed_plus_plus(std::span<const double> x, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = x.size();
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k));

  std::size_t first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * n));
  centroids.push_back(x[first]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = (x[i] - x[first]) * (x[i] - x[first]);

  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    const double c = x[pick];
    centroids.push_back(c);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], (x[i] - c) * (x[i] - c));
  }
  return centroids;
}

std::size_t nearest(double v, const std::vector<double>& centroids) {
  std::size_t best = 0;
  double best_d = (v - centroids[0]) * (v - centroids[0]);
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    const double d = (v - centroids[j]) * (v - centroids[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

void KMeansParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, "kmeans: " + what); };
  if (k_clusters < 1) bad("k_clusters must be >= 1");
  if (max_iters < 1) bad("max_iters must be >= 1");
  if (!(tol >= 0.0)) bad("tol must be >= 0");
}

double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        const std::vector<double>& centroids) {
  require_same_shape(img, labels, "kmeans_objective");
  double j = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double d = img[i] - centroids[labels[i] - 1];
    j += d * d;
  }
  return j;
}

KMeansResult kmeans_cluster(const GrayImage& img, const KMeansParams& p) {
  p.validate();
  const std::span<const double> x = img.pixels();
  const std::size_t n = x.size();
  const auto k = static_cast<std::size_t>(p.k_clusters);
  if (k > n) {
    fail(ErrorKind::invalid_argument, "kmeans: k_clusters " + std::to_string(k) +
                                          " exceeds pixel count " + std::to_string(n));
  }

  KMeansResult result{LabelMap(img.width(), img.height()), seed_plus_plus(x, p.k_clusters, p.seed),
                      0.0, 0, {}};
  std::vector<double>& centroids = result.centroids;
  std::vector<std::size_t> assign(n);
  std::vector<double> sum(k);
  std::vector<std::size_t> count(k);
  std::vector<double> dist(n);

  auto record = [&] {
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - centroids[assign[i]];
      objective += d * d;
    }
    result.objective = objective;
    result.objective_history.push_back(objective);
    ++result.iterations;
  };

  // One Lloyd iteration; returns the largest centroid movement.
  auto lloyd = [&] {
    for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(x[i], centroids);

    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[assign[i]] += x[i];
      ++count[assign[i]];
    }
    std::vector<double> next = centroids;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j]) next[j] = sum[j] / static_cast<double>(count[j]);
    }
    bool dist_ready = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j]) continue;
      if (!dist_ready) {
        for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(x[i] - next[assign[i]]);
        dist_ready = true;
      }
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (dist[i] > dist[far]) far = i;
      }
      next[j] = x[far];
      dist[far] = -1.0;  // claimed; the next empty cluster picks another pixel
    }

    double movement = 0.0;
    for (std::size_t j = 0; j < k; ++j) movement = std::max(movement, std::abs(next[j] - centroids[j]));
    centroids = std::move(next);
    record();
    return movement;
  };

  // Single-pixel moves that lower the objective (Hartigan). Leaves the
  // centroids at the exact cluster means; returns whether anything moved.
  auto refine_pass = [&] {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = assign[i];
      if (count[a] < 2) continue;
      const double na = static_cast<double>(count[a]);
      const double remove = na / (na - 1.0) * (x[i] - centroids[a]) * (x[i] - centroids[a]);
      std::size_t best = a;
      double best_delta = -1e-12 * remove;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = static_cast<double>(count[b]);
        const double delta = nb / (nb + 1.0) * (x[i] - centroids[b]) * (x[i] - centroids[b]) - remove;
        if (delta < best_delta) {
          best_delta = delta;
          best = b;
        }
      }
      if (best == a) continue;
      sum[a] -= x[i];
      --count[a];
      sum[best] += x[i];
      ++count[best];
      centroids[a] = sum[a] / static_cast<double>(count[a]);
      centroids[best] = sum[best] / static_cast<double>(count[best]);
      assign[i] = best;
      moved = true;
    }
    if (!moved) return false;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) sum[assign[i]] += x[i];
    for (std::size_t j = 0; j < k; ++j) centroids[j] = sum[j] / static_cast<double>(count[j]);
    record();
    return true;
  };

  while (result.iterations < p.max_iters) {
    if (lloyd() > p.tol) continue;
    if (!p.refine || result.iterations >= p.max_iters) break;
    if (std::find(count.begin(), count.end(), 0) != count.end()) break;
    if (!refine_pass()) break;
  }

  for (std::size_t i = 0; i < n; ++i) result.labels[i] = static_cast<std::uint32_t>(assign[i] + 1);
  return result;
}

KMeansResult kmeans_best_of(const GrayImage& img, const KMeansParams& p, int restarts) {
  if (restarts < 1) fail(ErrorKind::invalid_argument, "kmeans: restarts must be >= 1");
  KMeansParams run = p;
  KMeansResult best = kmeans_cluster(img, run);
  for (int r = 1; r < restarts; ++r) {
    run.seed = p.seed + static_cast<std::uint64_t>(r);
    KMeansResult candidate = kmeans_cluster(img, run);
    if (candidate.objective < best.objective) best = std::move(candidate);
  }
  return best;
}

}  // namespace glassseg
