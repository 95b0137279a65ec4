#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moralaxis {

using Day = std::chrono::sys_days;

/// Parses "YYYY-MM-DD". Throws std::invalid_argument.
Day parse_day(std::string_view s);
std::string format_day(Day d);

/// One social-media post as ingested. Unknown JSON fields are ignored.
struct RawPost {
  std::string id;
  std::string text;
  std::chrono::sys_seconds created_at{};
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::optional<std::string> place;
};

/// Parses an ISO-8601 timestamp ("2020-05-28", "2020-05-28T12:00:00Z",
/// fractional seconds and +hh:mm offsets accepted) into UTC.
std::chrono::sys_seconds parse_timestamp(std::string_view s);

/// Parses one JSONL record. Accepts "id" or "id_str", "text" or "full_text",
/// "created_at", "latitude"/"longitude" (or "lat"/"lon") and "place" (string or
/// object with "full_name"/"name"). Throws std::invalid_argument when the id is
/// missing or the timestamp does not parse.
RawPost parse_post(std::string_view json_line);

struct GeoBox {
  double lat_min = 32.75;
  double lon_min = -118.95;
  double lat_max = 34.82;
  double lon_max = -117.646374;
};

/// Parses "lat_min,lon_min,lat_max,lon_max".
GeoBox parse_bbox(std::string_view s);

struct DateRange {
  Day first = parse_day("2020-02-24");
  Day last = parse_day("2020-08-24");

  std::size_t days() const { return static_cast<std::size_t>((last - first).count()) + 1; }
};

/// Inclusive containment on both bounds. Posts without coordinates pass only
/// when allow_place is set and the place is non-empty.
bool geo_filter(const RawPost& post, const GeoBox& box, bool allow_place);

/// UTC calendar date of created_at within [first, last].
bool date_filter(const RawPost& post, const DateRange& range);

enum class KeywordGroup : std::size_t { BlackLivesMatter = 0, AllBlueLivesMatter, DefundThePolice };
inline constexpr std::size_t kKeywordGroupCount = 3;
inline constexpr std::array<KeywordGroup, kKeywordGroupCount> kKeywordGroups = {
    KeywordGroup::BlackLivesMatter, KeywordGroup::AllBlueLivesMatter, KeywordGroup::DefundThePolice};

std::string_view keyword_group_name(KeywordGroup g);
KeywordGroup parse_keyword_group(std::string_view s);

enum class KeywordKind { Hashtag, Word, Phrase };

struct Keyword {
  std::string text;                 // as written, e.g. "#blm" or "black lives matter"
  KeywordKind kind = KeywordKind::Word;
  std::vector<std::string> tokens;  // normalized tokens to look for
  KeywordGroup group = KeywordGroup::BlackLivesMatter;
};

/// Builds a keyword, inferring its group from its content unless one is given.
/// Throws std::invalid_argument if the keyword yields no tokens or its group
/// cannot be inferred.
Keyword make_keyword(std::string_view spec, std::optional<KeywordGroup> group = std::nullopt);

/// The nine default search terms.
std::vector<Keyword> default_keywords();

/// One keyword per line, optionally followed by a tab and a group name;
/// blank lines and lines starting with "//" are skipped. Surrounding double
/// quotes are removed.
std::vector<Keyword> load_keywords(const std::filesystem::path& path);

struct KeywordMatch {
  std::vector<std::string> matched;  // keyword texts, in keyword-list order
  std::optional<KeywordGroup> group;
};

/// Hashtags and bare words match whole tokens; phrases match contiguous token
/// runs. With several groups matched, BlackLivesMatter wins over
/// DefundThePolice, which wins over AllBlueLivesMatter.
KeywordMatch match_keywords(std::span<const std::string> tokens, std::span<const Keyword> keywords);

struct Document {
  std::string doc_id;
  std::string normalized_text;
  std::vector<std::string> tokens;
  Day day{};
  std::vector<std::string> matched_keywords;
  KeywordGroup keyword_group = KeywordGroup::BlackLivesMatter;
};

using GroupCounts = std::array<std::size_t, kKeywordGroupCount>;

struct DedupResult {
  std::vector<Document> unique;
  GroupCounts total_per_group{};
  GroupCounts unique_per_group{};
};

/// Keeps the first document for each exact normalized text.
DedupResult dedup(std::vector<Document> documents);

struct DailySeries {
  std::vector<Day> days;
  std::vector<GroupCounts> per_group;
  std::vector<std::size_t> total;
};

/// Zero-filled per-day counts over the range; documents outside it are ignored.
DailySeries daily_counts(std::span<const Document> documents, const DateRange& range);

}  // namespace moralaxis
