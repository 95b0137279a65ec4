#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moralaxis/analytics.hpp"

namespace moralaxis {

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty sample");
  Summary s;
  s.n = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    // Exact for constant samples; summation rounding would otherwise leak into sd.
    s.mean = *lo;
    return s;
  }
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.n);
  {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  s.ci95_half_width = s.sd > 0.0 ? 1.96 * s.sd / std::sqrt(static_cast<double>(s.n)) : 0.0;
  return s;
}

std::vector<ActivationSummary> cluster_activations(std::span<const MoralEmbedding> embeddings,
                                                   std::span<const std::size_t> labels, std::size_t k) {
  if (embeddings.size() != labels.size()) throw std::invalid_argument("cluster_activations: label count mismatch");
  for (const auto& e : embeddings)
    if (e.mode != EmbeddingMode::Poles)
      throw std::invalid_argument("cluster_activations: embeddings must use the poles layout");

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= k) throw std::invalid_argument("cluster_activations: label out of range");
    members[labels[i]].push_back(i);
  }

  std::vector<double> column;
  auto summarize_group = [&](std::string group, const std::vector<std::size_t>& idx) {
    if (idx.empty()) throw std::invalid_argument("cluster_activations: empty group " + group);
    ActivationSummary out;
    out.group = std::move(group);
    for (std::size_t d = 0; d < kEmbeddingWidth; ++d) {
      column.clear();
      for (auto i : idx) column.push_back(embeddings[i].values[d]);
      out.dims[d] = summarize(column);
    }
    return out;
  };

  std::vector<ActivationSummary> result;
  for (std::size_t c = 0; c < k; ++c) result.push_back(summarize_group(std::to_string(c), members[c]));
  std::vector<std::size_t> all(embeddings.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  result.push_back(summarize_group("all", all));
  return result;
}

Matrix standardize_columns(const Matrix& points) {
  Matrix out = points;
  const std::size_t n = points.rows();
  if (n == 0) return out;
  for (std::size_t j = 0; j < points.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (points(i, j) - mean) * (points(i, j) - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    for (std::size_t i = 0; i < n; ++i) out(i, j) = sd > 0.0 ? (points(i, j) - mean) / sd : points(i, j) - mean;
  }
  return out;
}

}  // namespace moralaxis
