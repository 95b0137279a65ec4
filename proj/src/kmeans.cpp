#include <cmath>
#include <limits>
#include <stdexcept>

#include "moralaxis/analytics.hpp"
#include "moralaxis/random.hpp"

namespace moralaxis {

namespace {

struct Fit {
  Matrix centroids;
  std::vector<std::size_t> labels;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

Matrix plus_plus_init(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centroids(k, points.cols());
  std::size_t first = rng.below(n);
  std::copy(points.row(first).begin(), points.row(first).end(), centroids.row(0).begin());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), centroids.row(0));

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] <= 0.0 && pick > 0) --pick;
    } else {
      pick = rng.below(n);
    }
    std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), centroids.row(c)));
  }
  return centroids;
}

void assign(const Matrix& points, const Matrix& centroids, std::vector<std::size_t>& labels) {
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::size_t best = 0;
    double best_d = squared_distance(points.row(i), centroids.row(0));
    for (std::size_t c = 1; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
  }
}

// Moves the point farthest from its centroid (among clusters with more than
// one member) into each empty cluster.
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<std::size_t>& labels) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    std::size_t far = points.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double d = squared_distance(points.row(i), centroids.row(labels[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == points.rows()) throw std::logic_error("k-means: cannot repair empty cluster");
    --sizes[labels[far]];
    labels[far] = c;
    sizes[c] = 1;
    std::copy(points.row(far).begin(), points.row(far).end(), centroids.row(c).begin());
  }
}

void update(const Matrix& points, const std::vector<std::size_t>& labels, Matrix& centroids) {
  const std::size_t k = centroids.rows();
  const std::size_t d = points.cols();
  Matrix sums(k, d);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto s = sums.row(labels[i]);
    const auto p = points.row(i);
    for (std::size_t j = 0; j < d; ++j) s[j] += p[j];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    auto dst = centroids.row(c);
    const auto s = sums.row(c);
    for (std::size_t j = 0; j < d; ++j) dst[j] = s[j] / static_cast<double>(counts[c]);
  }
}

Fit lloyd(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter, double tol) {
  Rng rng(seed);
  Fit fit;
  fit.centroids = plus_plus_init(points, k, rng);
  fit.labels.assign(points.rows(), 0);

  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= std::max<std::size_t>(max_iter, 1); ++it) {
    assign(points, fit.centroids, fit.labels);
    repair_empty(points, fit.centroids, fit.labels);
    update(points, fit.labels, fit.centroids);
    const double inertia = compute_inertia(points, fit.centroids, fit.labels);
    if (std::isfinite(prev) && inertia > prev + 1e-9 * std::max(1.0, prev))
      throw std::logic_error("k-means: inertia increased during Lloyd iteration");
    fit.inertia = inertia;
    fit.iterations = it;
    if (std::isfinite(prev) && prev - inertia <= tol * prev) break;
    prev = inertia;
  }
  return fit;
}

}  // namespace

std::vector<std::size_t> ClusterModel::sizes() const {
  std::vector<std::size_t> s(k, 0);
  for (auto l : labels) ++s[l];
  return s;
}

double compute_inertia(const Matrix& points, const Matrix& centroids, std::span<const std::size_t> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) total += squared_distance(points.row(i), centroids.row(labels[i]));
  return total;
}

ClusterModel kmeans(const Matrix& points, const KMeansOptions& options) {
  const std::size_t n = points.rows();
  if (options.k < 2) throw std::invalid_argument("k-means: k must be at least 2");
  if (n < options.k)
    throw std::invalid_argument("k-means: " + std::to_string(n) + " points is fewer than k = " + std::to_string(options.k));
  for (double v : points.data())
    if (!std::isfinite(v)) throw std::invalid_argument("k-means: non-finite input");

  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  std::optional<Fit> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    Fit fit = lloyd(points, options.k, derive_seed(options.seed, r), options.max_iter, options.tol);
    if (!best || fit.inertia < best->inertia) best = std::move(fit);
  }

  ClusterModel model;
  model.k = options.k;
  model.centroids = std::move(best->centroids);
  model.labels = std::move(best->labels);
  model.inertia = best->inertia;
  model.seed = options.seed;
  model.restarts = restarts;
  model.iterations = best->iterations;
  return model;
}

}  // namespace moralaxis
