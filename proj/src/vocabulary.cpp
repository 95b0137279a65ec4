#include <algorithm>
#include <map>
#include <stdexcept>

#include "moralaxis/analytics.hpp"

namespace moralaxis {

VocabularyReport distinctive_vocabulary(std::span<const std::vector<std::string>> documents,
                                        std::span<const std::size_t> labels, std::size_t k, std::size_t min_count,
                                        std::size_t top_n) {
  if (documents.size() != labels.size()) throw std::invalid_argument("distinctive_vocabulary: label count mismatch");

  std::map<std::string, std::vector<std::size_t>> counts;
  std::vector<std::size_t> cluster_tokens(k, 0);
  std::size_t all_tokens = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const std::size_t c = labels[d];
    if (c >= k) throw std::invalid_argument("distinctive_vocabulary: label out of range");
    for (const auto& t : documents[d]) {
      auto& row = counts[t];
      if (row.empty()) row.assign(k, 0);
      ++row[c];
    }
    cluster_tokens[c] += documents[d].size();
    all_tokens += documents[d].size();
  }

  VocabularyReport report;
  report.min_count = min_count;
  report.clusters.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& list = report.clusters[c];
    if (cluster_tokens[c] == 0) continue;
    const double out_tokens = static_cast<double>(all_tokens - cluster_tokens[c]);
    for (const auto& [term, row] : counts) {
      const std::size_t in = row[c];
      if (in == 0 || in < min_count) continue;
      std::size_t total = 0;
      for (auto v : row) total += v;
      const double rate_in = static_cast<double>(in) / static_cast<double>(cluster_tokens[c]);
      const double rate_out = (static_cast<double>(total - in) + 1.0) / (out_tokens + 1.0);
      list.push_back({term, in, rate_in / rate_out});
    }
    std::sort(list.begin(), list.end(), [](const DistinctiveTerm& a, const DistinctiveTerm& b) {
      if (a.distinctiveness != b.distinctiveness) return a.distinctiveness > b.distinctiveness;
      if (a.in_cluster_count != b.in_cluster_count) return a.in_cluster_count > b.in_cluster_count;
      return a.term < b.term;
    });
    if (list.size() > top_n) list.resize(top_n);
  }
  return report;
}

}  // namespace moralaxis
