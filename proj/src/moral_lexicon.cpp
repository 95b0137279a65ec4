#include "moralaxis/moral_lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "moralaxis/csv.hpp"
#include "moralaxis/text.hpp"

namespace moralaxis {

namespace {

constexpr std::array<std::string_view, kFoundationCount> kFoundationNames = {"care", "fairness", "loyalty", "authority",
                                                                            "sanctity"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::string_view what, std::size_t row) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw std::runtime_error("lexicon row " + std::to_string(row) + ": bad " + std::string(what) + " value '" + field + "'");
  return v;
}

std::unordered_map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string h = text::lowercase(trim(header[i]));
    if (i == 0 && h.rfind("\xEF\xBB\xBF", 0) == 0) h.erase(0, 3);
    idx.emplace(std::move(h), i);
  }
  return idx;
}

std::size_t pole_slot(Polarity p) {
  if (p == Polarity::Neutral) throw std::invalid_argument("Neutral is not a pole");
  return p == Polarity::Virtue ? 0 : 1;
}

std::unordered_map<std::string, double> load_sentiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read sentiment file " + path.string());
  auto header = csv::read_record(in);
  if (!header) throw std::runtime_error("sentiment file " + path.string() + " is empty");
  const auto idx = header_index(*header);
  if (!idx.count("word") || !idx.count("score"))
    throw std::runtime_error("sentiment file " + path.string() + " needs columns word,score");
  const std::size_t wi = idx.at("word");
  const std::size_t si = idx.at("score");

  std::unordered_map<std::string, double> scores;
  std::size_t row = 1;
  while (auto rec = csv::read_record(in)) {
    ++row;
    if (rec->size() == 1 && trim((*rec)[0]).empty()) continue;
    if (rec->size() <= std::max(wi, si)) throw std::runtime_error("sentiment row " + std::to_string(row) + ": too few fields");
    const double s = parse_number((*rec)[si], "score", row);
    if (s < -1.0 || s > 1.0) throw std::runtime_error("sentiment row " + std::to_string(row) + ": score outside [-1,1]");
    scores.emplace(text::lowercase(trim((*rec)[wi])), s);
  }
  return scores;
}

}  // namespace

std::string_view foundation_name(Foundation f) { return kFoundationNames[index_of(f)]; }

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Virtue: return "virtue";
    case Polarity::Vice: return "vice";
    case Polarity::Neutral: return "neutral";
  }
  return "neutral";
}

Foundation assign_foundation(const FoundationProbs& probs) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < kFoundationCount; ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
      throw std::invalid_argument("foundation probability outside [0,1]: " + std::to_string(probs[i]));
    if (probs[i] > probs[best]) best = i;
  }
  return kFoundations[best];
}

Polarity assign_polarity(double sentiment) {
  if (!(sentiment >= -1.0 && sentiment <= 1.0))
    throw std::invalid_argument("sentiment outside [-1,1]: " + std::to_string(sentiment));
  if (sentiment > 0.0) return Polarity::Virtue;
  if (sentiment < 0.0) return Polarity::Vice;
  return Polarity::Neutral;
}

MoralLexicon MoralLexicon::from_entries(std::vector<LexiconEntry> entries) {
  MoralLexicon lex;
  for (auto& e : entries) {
    ++lex.report_.rows;
    e.term = text::lowercase(trim(e.term));
    if (e.term.empty()) throw std::invalid_argument("lexicon entry with empty term");
    e.foundation = assign_foundation(e.probs);
    e.polarity = assign_polarity(e.sentiment);
    if (lex.entries_.count(e.term)) {
      ++lex.report_.duplicates;
      continue;
    }
    lex.entries_.emplace(e.term, e);
  }
  // entries_ is ordered, so pole lists come out sorted.
  for (const auto& [term, e] : lex.entries_) {
    if (e.polarity == Polarity::Neutral) {
      ++lex.neutral_count_;
      continue;
    }
    lex.poles_[index_of(e.foundation)][pole_slot(e.polarity)].push_back(term);
  }
  lex.report_.neutral = lex.neutral_count_;
  for (std::size_t f = 0; f < kFoundationCount; ++f)
    for (std::size_t p = 0; p < 2; ++p) lex.report_.pole_counts[f][p] = lex.poles_[f][p].size();
  return lex;
}

const LexiconEntry* MoralLexicon::find(std::string_view term) const {
  const bool plain = std::all_of(term.begin(), term.end(), [](char c) {
    return static_cast<unsigned char>(c) < 0x80 && !(c >= 'A' && c <= 'Z');
  });
  const auto it = plain ? entries_.find(term) : entries_.find(text::lowercase(term));
  return it == entries_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& MoralLexicon::pole(Foundation f, Polarity p) const {
  return poles_[index_of(f)][pole_slot(p)];
}

MoralLexicon load_lexicon(const std::filesystem::path& lexicon_path,
                          const std::optional<std::filesystem::path>& sentiment_path, const LexiconOptions& options) {
  std::ifstream in(lexicon_path);
  if (!in) throw std::runtime_error("cannot read lexicon file " + lexicon_path.string());
  auto header = csv::read_record(in);
  if (!header) throw std::runtime_error("lexicon file " + lexicon_path.string() + " is empty");
  const auto idx = header_index(*header);

  if (!idx.count("word")) throw std::runtime_error("lexicon header is missing column 'word'");
  std::array<std::size_t, kFoundationCount> prob_col{};
  for (std::size_t f = 0; f < kFoundationCount; ++f) {
    const std::string col = std::string(kFoundationNames[f]) + "_p";
    if (!idx.count(col)) throw std::runtime_error("lexicon header is missing column '" + col + "'");
    prob_col[f] = idx.at(col);
  }
  const std::size_t word_col = idx.at("word");
  const auto sent_it = idx.find("sentiment");
  const bool has_sentiment_col = sent_it != idx.end();
  if (!has_sentiment_col && !sentiment_path)
    throw std::runtime_error("lexicon has no sentiment column and no sentiment file was given");

  std::unordered_map<std::string, double> external;
  if (sentiment_path) external = load_sentiment(*sentiment_path);

  std::vector<LexiconEntry> rows;
  std::size_t below = 0;
  std::size_t joined = 0;
  std::size_t row = 1;
  while (auto rec = csv::read_record(in)) {
    ++row;
    if (rec->size() == 1 && trim((*rec)[0]).empty()) continue;
    std::size_t need = word_col;
    for (auto c : prob_col) need = std::max(need, c);
    if (has_sentiment_col) need = std::max(need, sent_it->second);
    if (rec->size() <= need) throw std::runtime_error("lexicon row " + std::to_string(row) + ": too few fields");

    LexiconEntry e;
    e.term = text::lowercase(trim((*rec)[word_col]));
    if (e.term.empty()) throw std::runtime_error("lexicon row " + std::to_string(row) + ": empty word");
    for (std::size_t f = 0; f < kFoundationCount; ++f) {
      e.probs[f] = parse_number((*rec)[prob_col[f]], "probability", row);
      if (e.probs[f] < 0.0 || e.probs[f] > 1.0)
        throw std::runtime_error("lexicon row " + std::to_string(row) + ": probability outside [0,1]");
    }
    if (sentiment_path) {
      const auto it = external.find(e.term);
      if (it != external.end()) {
        e.sentiment = it->second;
        ++joined;
      } else if (has_sentiment_col) {
        e.sentiment = parse_number((*rec)[sent_it->second], "sentiment", row);
      }
    } else {
      e.sentiment = parse_number((*rec)[sent_it->second], "sentiment", row);
    }
    if (e.sentiment < -1.0 || e.sentiment > 1.0)
      throw std::runtime_error("lexicon row " + std::to_string(row) + ": sentiment outside [-1,1]");

    if (*std::max_element(e.probs.begin(), e.probs.end()) < options.min_probability) {
      ++below;
      continue;
    }
    rows.push_back(std::move(e));
  }

  MoralLexicon lex = MoralLexicon::from_entries(std::move(rows));
  if (lex.size() == 0) throw std::runtime_error("lexicon " + lexicon_path.string() + " has no entries");
  lex.report_.below_threshold = below;
  lex.report_.sentiment_joined = joined;
  return lex;
}

}  // namespace moralaxis
