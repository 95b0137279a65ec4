#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moralaxis {

/// The five moral foundations, in the canonical order used for every
/// vector layout and for tie-breaking.
enum class Foundation : std::size_t { Care = 0, Fairness, Loyalty, Authority, Sanctity };

inline constexpr std::size_t kFoundationCount = 5;
inline constexpr std::array<Foundation, kFoundationCount> kFoundations = {
    Foundation::Care, Foundation::Fairness, Foundation::Loyalty, Foundation::Authority, Foundation::Sanctity};

constexpr std::size_t index_of(Foundation f) { return static_cast<std::size_t>(f); }

/// Lowercase identifier ("care", "fairness", ...).
std::string_view foundation_name(Foundation f);

enum class Polarity { Virtue, Vice, Neutral };

std::string_view polarity_name(Polarity p);

using FoundationProbs = std::array<double, kFoundationCount>;

/// Argmax with ties going to the earliest foundation. Values must lie in [0, 1].
Foundation assign_foundation(const FoundationProbs& probs);

/// Sign of the sentiment score; zero is Neutral. Value must lie in [-1, 1].
Polarity assign_polarity(double sentiment);

struct LexiconEntry {
  std::string term;
  FoundationProbs probs{};
  double sentiment = 0.0;
  Foundation foundation = Foundation::Care;
  Polarity polarity = Polarity::Neutral;
};

struct LexiconLoadReport {
  std::size_t rows = 0;
  std::size_t duplicates = 0;
  std::size_t below_threshold = 0;
  std::size_t sentiment_joined = 0;  // rows whose score came from the sentiment file
  std::size_t neutral = 0;
  std::array<std::array<std::size_t, 2>, kFoundationCount> pole_counts{};
};

struct LexiconOptions {
  /// Entries whose largest probability is below this are not loaded.
  double min_probability = 0.0;
};

/// A labelled moral dictionary with its ten pole term sets.
class MoralLexicon {
 public:
  MoralLexicon() = default;

  /// Builds from already-labelled rows; duplicate terms keep the first row.
  static MoralLexicon from_entries(std::vector<LexiconEntry> entries);

  /// Lookup lowercases its argument.
  const LexiconEntry* find(std::string_view term) const;
  bool contains(std::string_view term) const { return find(term) != nullptr; }
  std::size_t size() const { return entries_.size(); }

  /// Sorted member terms of one pole. Polarity must be Virtue or Vice.
  const std::vector<std::string>& pole(Foundation f, Polarity p) const;

  std::size_t neutral_count() const { return neutral_count_; }
  const LexiconLoadReport& load_report() const { return report_; }

  /// All entries ordered by term.
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }

 private:
  friend MoralLexicon load_lexicon(const std::filesystem::path&, const std::optional<std::filesystem::path>&,
                                   const LexiconOptions&);

  std::map<std::string, LexiconEntry, std::less<>> entries_;
  std::array<std::array<std::vector<std::string>, 2>, kFoundationCount> poles_{};
  std::size_t neutral_count_ = 0;
  LexiconLoadReport report_;
};

/// Reads `word,care_p,fairness_p,loyalty_p,authority_p,sanctity_p[,sentiment]`.
/// Without a sentiment column the sentiment CSV (`word,score`) is required;
/// when both are present the file's scores take precedence. Words missing
/// from the sentiment source get 0 (Neutral).
MoralLexicon load_lexicon(const std::filesystem::path& lexicon_path,
                          const std::optional<std::filesystem::path>& sentiment_path = std::nullopt,
                          const LexiconOptions& options = {});

}  // namespace moralaxis
