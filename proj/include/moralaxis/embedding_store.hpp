#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace moralaxis {

struct EmbeddingLoadReport {
  std::size_t lines_read = 0;
  std::size_t accepted = 0;
  std::size_t malformed = 0;   // unparsable, non-finite or zero-norm rows
  std::size_t duplicates = 0;  // later occurrences of an already stored term
  std::size_t filtered = 0;    // dropped by the vocabulary filter
  bool header_seen = false;
};

/// Term -> vector lookup over a pretrained word-vector file.
///
/// Keys are lowercased at load and on lookup. Raw vectors are stored as
/// read; unit-normalized copies back the cosine fast path.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dimension, std::string source_path);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  const std::string& source_path() const { return source_path_; }
  const EmbeddingLoadReport& load_report() const { return report_; }

  /// Inserts a vector; returns false if the term is already present.
  /// Throws std::invalid_argument on wrong length or zero norm.
  bool insert(std::string_view term, std::span<const double> vec);

  bool contains(std::string_view term) const { return find(term) != nullptr; }

  /// Raw vector, or nullptr when the term is out of vocabulary.
  const std::vector<double>* find(std::string_view term) const;

  /// Unit-norm copy of the stored vector, or nullptr.
  const std::vector<double>* find_unit(std::string_view term) const;

  /// Returns a copy with every vector multiplied by factor (> 0).
  EmbeddingTable scaled(double factor) const;

  /// Terms in insertion order.
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  friend EmbeddingTable load_embeddings(const std::filesystem::path&, const std::unordered_set<std::string>*);
  std::size_t slot(std::string_view term) const;

  std::size_t dimension_;
  std::string source_path_;
  std::vector<std::string> terms_;
  std::vector<std::vector<double>> raw_;
  std::vector<std::vector<double>> unit_;
  std::unordered_map<std::string, std::size_t> index_;
  EmbeddingLoadReport report_;
};

/// Loads whitespace-separated "term c1 c2 ... cd" lines, tolerating an
/// optional "count dimension" header. Malformed rows are skipped and
/// counted; a row with a different component count is fatal, as is an
/// empty result. vocab_filter, when given, holds lowercase terms to keep.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const std::unordered_set<std::string>* vocab_filter = nullptr);

double norm(std::span<const double> v);
double dot(std::span<const double> u, std::span<const double> v);

/// u.v / (|u||v|). Throws std::invalid_argument on length mismatch or zero norm.
double cosine(std::span<const double> u, std::span<const double> v);

/// Dot product of two already unit-normalized vectors.
double cosine_unit(std::span<const double> u_unit, std::span<const double> v_unit);

struct Centroid {
  std::vector<double> vector;
  std::size_t resolved = 0;
  std::size_t requested = 0;
};

/// Mean of the vectors of the terms that resolve. Throws std::invalid_argument
/// if none do.
Centroid centroid(std::span<const std::string> terms, const EmbeddingTable& table);

}  // namespace moralaxis
