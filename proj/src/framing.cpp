#include "moralaxis/framing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moralaxis {

std::string_view baseline_mode_name(BaselineMode m) { return m == BaselineMode::Corpus ? "corpus" : "zero"; }

BaselineMode parse_baseline_mode(std::string_view s) {
  if (s == "corpus") return BaselineMode::Corpus;
  if (s == "zero") return BaselineMode::Zero;
  throw std::invalid_argument("unknown baseline mode '" + std::string(s) + "' (expected corpus or zero)");
}

std::string_view embedding_mode_name(EmbeddingMode m) { return m == EmbeddingMode::Poles ? "poles" : "frameaxis"; }

EmbeddingMode parse_embedding_mode(std::string_view s) {
  if (s == "poles") return EmbeddingMode::Poles;
  if (s == "frameaxis") return EmbeddingMode::FrameAxis;
  throw std::invalid_argument("unknown embedding mode '" + std::string(s) + "' (expected poles or frameaxis)");
}

std::array<std::string, kEmbeddingWidth> embedding_columns(EmbeddingMode mode) {
  std::array<std::string, kEmbeddingWidth> cols;
  const char* first = mode == EmbeddingMode::Poles ? "_virtue" : "_bias";
  const char* second = mode == EmbeddingMode::Poles ? "_vice" : "_intensity";
  for (Foundation f : kFoundations) {
    const std::string name(foundation_name(f));
    cols[2 * index_of(f)] = name + first;
    cols[2 * index_of(f) + 1] = name + second;
  }
  return cols;
}

AxisSet build_axes(const MoralLexicon& lexicon, const EmbeddingTable& table) {
  AxisSet set;
  for (Foundation f : kFoundations) {
    FoundationAxis& axis = set.axes[index_of(f)];
    axis.foundation = f;
    const auto resolve = [&](Polarity p) {
      const auto& terms = lexicon.pole(f, p);
      try {
        return centroid(terms, table);
      } catch (const std::invalid_argument&) {
        throw std::runtime_error("degenerate axis: no " + std::string(polarity_name(p)) + "-pole term of foundation '" +
                                 std::string(foundation_name(f)) + "' resolves in the embedding table");
      }
    };
    Centroid virtue = resolve(Polarity::Virtue);
    Centroid vice = resolve(Polarity::Vice);

    std::vector<double> diff(table.dimension());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = virtue.vector[j] - vice.vector[j];
    const double n = norm(diff);
    if (!(n >= 1e-12))
      throw std::runtime_error("degenerate axis: virtue and vice centroids of foundation '" +
                               std::string(foundation_name(f)) + "' coincide");
    for (double& x : diff) x /= n;

    axis.direction = std::move(diff);
    axis.virtue_centroid = std::move(virtue.vector);
    axis.vice_centroid = std::move(vice.vector);
    axis.virtue_terms_resolved = virtue.resolved;
    axis.vice_terms_resolved = vice.resolved;
  }
  return set;
}

std::optional<double> project_word(std::string_view term, const FoundationAxis& axis, const EmbeddingTable& table) {
  const auto* unit = table.find_unit(term);
  if (!unit) return std::nullopt;
  return cosine_unit(*unit, axis.direction);
}

std::optional<MoralScore> score_document(std::span<const std::string> tokens, const MoralLexicon& lexicon,
                                         const AxisSet& axes, const EmbeddingTable& table, std::string doc_id) {
  // Ordered counts: summation order is fixed regardless of token order.
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];

  std::vector<std::pair<const std::vector<double>*, std::size_t>> contributing;
  std::size_t total = 0;
  for (const auto& [term, n] : counts) {
    if (!lexicon.contains(term)) continue;
    const auto* unit = table.find_unit(term);
    if (!unit) continue;
    contributing.emplace_back(unit, n);
    total += n;
  }
  if (total == 0) return std::nullopt;

  MoralScore score;
  score.doc_id = std::move(doc_id);
  score.contributing_tokens = total;
  const double denom = static_cast<double>(total);
  for (Foundation f : kFoundations) {
    const std::size_t fi = index_of(f);
    const auto& dir = axes.axes[fi].direction;
    const double base = axes.baseline_bias[fi];
    double bias = 0.0, virtue = 0.0, vice = 0.0, intensity = 0.0;
    for (const auto& [unit, n] : contributing) {
      const double w = static_cast<double>(n) / denom;
      const double p = cosine_unit(*unit, dir);
      bias += w * p;
      if (p > 0.0) virtue += w * p;
      if (p < 0.0) vice += w * (-p);
      intensity += w * (p - base) * (p - base);
    }
    score.bias[fi] = bias;
    score.virtue[fi] = virtue;
    score.vice[fi] = vice;
    score.intensity[fi] = intensity;
  }
  return score;
}

AxisSet compute_baseline(std::span<const MoralScore> scores, AxisSet axes, BaselineMode mode) {
  if (scores.empty()) throw std::invalid_argument("baseline: empty moral corpus");
  if (mode == BaselineMode::Zero) {
    axes.baseline_bias.fill(0.0);
    return axes;
  }
  PerFoundation weighted{};
  double tokens = 0.0;
  for (const auto& s : scores) {
    const double n = static_cast<double>(s.contributing_tokens);
    for (std::size_t f = 0; f < kFoundationCount; ++f) weighted[f] += s.bias[f] * n;
    tokens += n;
  }
  for (std::size_t f = 0; f < kFoundationCount; ++f)
    axes.baseline_bias[f] = std::clamp(weighted[f] / tokens, -1.0, 1.0);
  return axes;
}

MoralEmbedding embed(const MoralScore& score, EmbeddingMode mode) {
  MoralEmbedding e;
  e.doc_id = score.doc_id;
  e.mode = mode;
  for (std::size_t f = 0; f < kFoundationCount; ++f) {
    if (mode == EmbeddingMode::Poles) {
      e.values[2 * f] = score.virtue[f];
      e.values[2 * f + 1] = score.vice[f];
    } else {
      e.values[2 * f] = score.bias[f];
      e.values[2 * f + 1] = score.intensity[f];
    }
  }
  return e;
}

FoundationVocabulary foundation_vocabulary(const std::map<std::string, std::size_t>& corpus_terms,
                                           const MoralLexicon& lexicon, const AxisSet& axes,
                                           const EmbeddingTable& table, std::size_t top_n) {
  FoundationVocabulary out;
  if (top_n == 0) return out;
  for (Foundation f : kFoundations) {
    const auto& axis = axes.axis(f);
    auto& virtue = out.lists[index_of(f)][0];
    auto& vice = out.lists[index_of(f)][1];
    for (const auto& [term, freq] : corpus_terms) {
      if (freq == 0 || !lexicon.contains(term)) continue;
      const auto p = project_word(term, axis, table);
      if (!p) continue;
      if (*p > 0.0) virtue.push_back({term, *p, freq});
      if (*p < 0.0) vice.push_back({term, *p, freq});
    }
    const auto rank = [](auto better) {
      return [better](const VocabularyTerm& a, const VocabularyTerm& b) {
        if (a.projection != b.projection) return better(a.projection, b.projection);
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.term < b.term;
      };
    };
    std::sort(virtue.begin(), virtue.end(), rank(std::greater<double>()));
    std::sort(vice.begin(), vice.end(), rank(std::less<double>()));
    if (virtue.size() > top_n) virtue.resize(top_n);
    if (vice.size() > top_n) vice.resize(top_n);
  }
  return out;
}

}  // namespace moralaxis
