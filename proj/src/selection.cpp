#include <algorithm>
#include <stdexcept>

#include "moralaxis/analytics.hpp"
#include "moralaxis/random.hpp"

namespace moralaxis {

namespace {

// Above this many sampled points the distance matrix is recomputed per k
// instead of cached (n^2 doubles).
constexpr std::size_t kCachedDistanceLimit = 4000;

}  // namespace

std::uint64_t kmeans_seed_for(std::uint64_t selection_seed, std::size_t k) {
  return derive_seed(selection_seed, std::uint64_t{0x6b6d00} + k);
}

SelectionTable select_k(const Matrix& points, const SelectionOptions& options) {
  const std::size_t n = points.rows();
  if (options.k_min > options.k_max) throw std::invalid_argument("select_k: empty k range");
  if (options.k_min < 2 || options.k_max > n)
    throw std::invalid_argument("select_k: k range " + std::to_string(options.k_min) + ".." +
                                std::to_string(options.k_max) + " must lie within [2, " + std::to_string(n) + "]");

  const auto idx = silhouette_sample(n, options.silhouette);
  std::optional<Matrix> cached;
  if (idx.size() <= kCachedDistanceLimit) {
    Matrix sub(idx.size(), points.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
      std::copy(points.row(idx[i]).begin(), points.row(idx[i]).end(), sub.row(i).begin());
    cached = pairwise_distances(sub);
  }

  SelectionTable table;
  for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
    KMeansOptions ko;
    ko.k = k;
    ko.seed = kmeans_seed_for(options.seed, k);
    ko.restarts = options.restarts;
    ko.max_iter = options.max_iter;
    ko.tol = options.tol;
    const ClusterModel model = kmeans(points, ko);

    SelectionRow row;
    row.k = k;
    row.inertia = model.inertia;
    const auto sizes = model.sizes();
    const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
    row.min_cluster_fraction = static_cast<double>(*mn) / static_cast<double>(n);
    row.max_cluster_fraction = static_cast<double>(*mx) / static_cast<double>(n);
    row.eligible = row.min_cluster_fraction >= options.min_cluster_fraction;

    if (cached) {
      std::vector<std::size_t> sub_labels(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) sub_labels[i] = model.labels[idx[i]];
      row.mean_silhouette = silhouette_from_distances(*cached, sub_labels).mean;
    } else {
      row.mean_silhouette = silhouette(points, model.labels, options.silhouette).mean;
    }
    table.rows.push_back(row);
  }

  const auto better = [](const SelectionRow* best, const SelectionRow& r) {
    return best == nullptr || r.mean_silhouette > best->mean_silhouette;
  };
  const SelectionRow* best = nullptr;
  for (const auto& r : table.rows)
    if (r.eligible && better(best, r)) best = &r;
  if (!best) {
    table.fallback = true;
    for (const auto& r : table.rows)
      if (better(best, r)) best = &r;
  }
  table.chosen_k = best->k;
  return table;
}

}  // namespace moralaxis
