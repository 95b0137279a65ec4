#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "moralaxis/matrix.hpp"

namespace moralaxis {

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;  // also where momentum switches
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::uint64_t seed = 0;
};

struct KlSample {
  std::size_t iteration = 0;
  double kl = 0.0;
};

struct Projection {
  Matrix coordinates;  // n x 2, centred
  double initial_kl = 0.0;
  std::vector<KlSample> kl_trace;  // every 50 iterations
  TsneConfig config;
};

struct ConditionalAffinities {
  Matrix p;                      // row i holds p(j | i); diagonal zero
  std::vector<double> beta;      // 1 / (2 sigma_i^2)
  std::vector<double> entropy;   // Shannon entropy of row i, in bits
};

/// Per-point Gaussian bandwidths found by bisection so each row's entropy
/// matches log2(perplexity).
ConditionalAffinities conditional_affinities(const Matrix& points, double perplexity);

/// Symmetrized joint affinities (p(j|i) + p(i|j)) normalized to sum 1.
Matrix joint_affinities(const ConditionalAffinities& conditional);

/// KL(P || Q) where Q is the Student-t kernel over the embedding.
double kl_divergence(const Matrix& joint, const Matrix& embedding);

/// Exact O(n^2) t-SNE into two dimensions. Memory is one n x n matrix of
/// doubles. Throws std::invalid_argument when n < 10, perplexity is not below
/// (n - 1) / 3, iterations < 250, or any input is non-finite.
Projection tsne(const Matrix& points, const TsneConfig& config);

}  // namespace moralaxis
