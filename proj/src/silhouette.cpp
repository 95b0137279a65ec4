#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "moralaxis/analytics.hpp"
#include "moralaxis/random.hpp"

namespace moralaxis {

namespace {

// Sample points keep their original labels; distances come from dist(i, j).
template <class DistanceFn>
SilhouetteReport silhouette_core(std::span<const std::size_t> labels, DistanceFn dist) {
  const std::size_t n = labels.size();
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  const auto present = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
  if (present < 2) throw std::invalid_argument("silhouette: need at least two non-empty clusters");

  SilhouetteReport report;
  report.per_sample.resize(n);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = labels[i];
    if (sizes[own] == 1) {
      report.per_sample[i] = 0.0;
      continue;
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[labels[j]] += dist(i, j);
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double m = std::max(a, b);
    report.per_sample[i] = m > 0.0 ? (b - a) / m : 0.0;
  }
  double total = 0.0;
  for (double s : report.per_sample) total += s;
  report.mean = total / static_cast<double>(n);
  report.sample_indices.resize(n);
  std::iota(report.sample_indices.begin(), report.sample_indices.end(), std::size_t{0});
  return report;
}

void validate_labels(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  if (k < 2) throw std::invalid_argument("silhouette: need at least two clusters");
  std::vector<bool> seen(k, false);
  for (auto l : labels) seen[l] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("silhouette: empty cluster in label set");
}

}  // namespace

Matrix pairwise_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::sqrt(squared_distance(points.row(i), points.row(j)));
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

SilhouetteReport silhouette_from_distances(const Matrix& distances, std::span<const std::size_t> labels) {
  if (distances.rows() != labels.size() || distances.cols() != labels.size())
    throw std::invalid_argument("silhouette: distance matrix does not match label count");
  return silhouette_core(labels, [&](std::size_t i, std::size_t j) { return distances(i, j); });
}

std::vector<std::size_t> silhouette_sample(std::size_t n, const SilhouetteOptions& options) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (!options.sample_cap || n <= *options.sample_cap) return idx;
  const std::size_t cap = *options.sample_cap;
  Rng rng(options.seed);
  for (std::size_t i = 0; i < cap; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SilhouetteReport silhouette(const Matrix& points, std::span<const std::size_t> labels,
                            const SilhouetteOptions& options) {
  if (points.rows() != labels.size()) throw std::invalid_argument("silhouette: label count does not match points");
  validate_labels(labels);

  const auto idx = silhouette_sample(points.rows(), options);
  std::vector<std::size_t> sub_labels(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) sub_labels[i] = labels[idx[i]];

  SilhouetteReport report = silhouette_core(sub_labels, [&](std::size_t i, std::size_t j) {
    return std::sqrt(squared_distance(points.row(idx[i]), points.row(idx[j])));
  });
  report.sample_indices = idx;
  report.sampled = idx.size() < points.rows();
  report.sample_cap = options.sample_cap;
  return report;
}

}  // namespace moralaxis
