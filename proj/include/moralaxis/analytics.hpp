#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moralaxis/framing.hpp"
#include "moralaxis/matrix.hpp"

namespace moralaxis {

// ---------------------------------------------------------------- k-means

struct KMeansOptions {
  std::size_t k = 4;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // stop when relative inertia improvement drops below this
};

struct ClusterModel {
  std::size_t k = 0;
  Matrix centroids;                 // k x d
  std::vector<std::size_t> labels;  // one per point, each < k
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::size_t iterations = 0;  // Lloyd iterations of the winning restart

  std::vector<std::size_t> sizes() const;
};

/// Best-of-restarts Lloyd's algorithm with k-means++ seeding. Every returned
/// cluster is non-empty. Throws std::invalid_argument if n < k, k < 2, or any
/// point is non-finite.
ClusterModel kmeans(const Matrix& points, const KMeansOptions& options);

/// Sum of squared distances of each point to its labelled centroid.
double compute_inertia(const Matrix& points, const Matrix& centroids, std::span<const std::size_t> labels);

// ------------------------------------------------------------- silhouette

struct SilhouetteOptions {
  std::optional<std::size_t> sample_cap = 10000;
  std::uint64_t seed = 0;
};

struct SilhouetteReport {
  std::vector<double> per_sample;        // aligned with sample_indices
  std::vector<std::size_t> sample_indices;
  double mean = 0.0;
  bool sampled = false;
  std::optional<std::size_t> sample_cap;
};

/// Mean silhouette (b - a) / max(a, b) with Euclidean distances. Singleton
/// clusters score 0. Above sample_cap points, a seeded uniform subset is used.
/// Throws std::invalid_argument with fewer than two clusters or an empty one.
SilhouetteReport silhouette(const Matrix& points, std::span<const std::size_t> labels,
                            const SilhouetteOptions& options = {});

/// Same computation over a precomputed n x n distance matrix.
SilhouetteReport silhouette_from_distances(const Matrix& distances, std::span<const std::size_t> labels);

Matrix pairwise_distances(const Matrix& points);

/// Sorted point indices used by silhouette(): all of them at or below the cap,
/// otherwise a seeded uniform subset of size cap.
std::vector<std::size_t> silhouette_sample(std::size_t n, const SilhouetteOptions& options);

// ---------------------------------------------------------- model selection

struct SelectionRow {
  std::size_t k = 0;
  double mean_silhouette = 0.0;
  double inertia = 0.0;
  double min_cluster_fraction = 0.0;
  double max_cluster_fraction = 0.0;
  bool eligible = false;
};

struct SelectionTable {
  std::vector<SelectionRow> rows;
  std::size_t chosen_k = 0;
  bool fallback = false;  // no k met the size floor; chose best silhouette overall
};

struct SelectionOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::uint64_t seed = 0;
  double min_cluster_fraction = 0.02;
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  SilhouetteOptions silhouette;
};

/// Fits k-means for each k in [k_min, k_max] and picks the k with the highest
/// mean silhouette among those whose smallest cluster holds at least
/// min_cluster_fraction of the points.
SelectionTable select_k(const Matrix& points, const SelectionOptions& options);

/// Seed used for the k-means fit of a given k inside select_k.
std::uint64_t kmeans_seed_for(std::uint64_t selection_seed, std::size_t k);

// ---------------------------------------------------------- activations

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 when n == 1
  std::size_t n = 0;
  double ci95_half_width = 0.0;  // 1.96 * sd / sqrt(n)
};

/// Throws std::invalid_argument on an empty sample.
Summary summarize(std::span<const double> values);

struct ActivationSummary {
  std::string group;  // cluster index as text, or "all"
  std::array<Summary, kEmbeddingWidth> dims;
};

/// One summary per cluster (0..k-1) followed by the overall "all" group.
/// Embeddings must use the Poles layout.
std::vector<ActivationSummary> cluster_activations(std::span<const MoralEmbedding> embeddings,
                                                   std::span<const std::size_t> labels, std::size_t k);

// ---------------------------------------------------------- vocabulary

struct DistinctiveTerm {
  std::string term;
  std::size_t in_cluster_count = 0;
  double distinctiveness = 0.0;
};

struct VocabularyReport {
  std::vector<std::vector<DistinctiveTerm>> clusters;
  std::size_t min_count = 0;
};

/// Ranks each cluster's terms by in-cluster rate over add-one smoothed
/// out-of-cluster rate, keeping terms seen at least min_count times.
VocabularyReport distinctive_vocabulary(std::span<const std::vector<std::string>> documents,
                                        std::span<const std::size_t> labels, std::size_t k,
                                        std::size_t min_count = 5, std::size_t top_n = 20);

// ---------------------------------------------------------- helpers

/// Column-wise z-score; constant columns are centred only.
Matrix standardize_columns(const Matrix& points);

}  // namespace moralaxis
