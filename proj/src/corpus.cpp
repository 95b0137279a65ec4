#include "moralaxis/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "moralaxis/text.hpp"

namespace moralaxis {

namespace {

using nlohmann::json;
using namespace std::chrono;

int read_int(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw std::invalid_argument("truncated date/time");
  int v = 0;
  const auto res = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (res.ec != std::errc() || res.ptr != s.data() + pos + len) throw std::invalid_argument("bad digits in date/time");
  return v;
}

Day make_day(int y, int m, int d) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  return sys_days{ymd};
}

// "Wed Oct 10 20:19:24 +0000 2018"
std::optional<sys_seconds> parse_twitter_time(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[19] != ' ' || s[25] != ' ') return std::nullopt;
  const auto it = std::find(kMonths.begin(), kMonths.end(), s.substr(4, 3));
  if (it == kMonths.end()) return std::nullopt;
  const int month_num = static_cast<int>(it - kMonths.begin()) + 1;
  const Day d = make_day(read_int(s, 26, 4), month_num, read_int(s, 8, 2));
  const int hh = read_int(s, 11, 2), mm = read_int(s, 14, 2), ss = read_int(s, 17, 2);
  const int sign = s[20] == '-' ? -1 : 1;
  const int off = sign * (read_int(s, 21, 2) * 60 + read_int(s, 23, 2));
  return sys_seconds{d} + hours{hh} + minutes{mm} + seconds{ss} - minutes{off};
}

std::string json_string(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    const auto it = obj.find(k);
    if (it == obj.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
  }
  return {};
}

std::optional<double> json_number(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    const auto it = obj.find(k);
    if (it == obj.end() || it->is_null()) continue;
    if (it->is_number()) return it->get<double>();
    if (it->is_string()) {
      const auto s = it->get<std::string>();
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    }
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<KeywordGroup> infer_group(const std::vector<std::string>& tokens) {
  std::string joined;
  for (const auto& t : tokens) joined += t;
  if (joined.find("defund") != std::string::npos) return KeywordGroup::DefundThePolice;
  if (joined.find("alllivesmatter") != std::string::npos || joined.find("allivesmatter") != std::string::npos ||
      joined.find("bluelivesmatter") != std::string::npos)
    return KeywordGroup::AllBlueLivesMatter;
  if (joined.find("blacklivesmatter") != std::string::npos || joined.rfind("blm", 0) == 0)
    return KeywordGroup::BlackLivesMatter;
  return std::nullopt;
}

}  // namespace

Day parse_day(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(s) + "'");
  return make_day(read_int(s, 0, 4), read_int(s, 5, 2), read_int(s, 8, 2));
}

std::string format_day(Day d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

sys_seconds parse_timestamp(std::string_view s) {
  const std::string t = trim(s);
  std::string_view v = t;
  if (auto tw = parse_twitter_time(v)) return *tw;
  if (v.size() < 10) throw std::invalid_argument("unparseable timestamp '" + t + "'");
  const Day d = parse_day(v.substr(0, 10));
  sys_seconds out{d};
  std::size_t pos = 10;
  if (pos < v.size() && (v[pos] == 'T' || v[pos] == ' ')) {
    ++pos;
    const int hh = read_int(v, pos, 2);
    if (pos + 2 >= v.size() || v[pos + 2] != ':') throw std::invalid_argument("unparseable timestamp '" + t + "'");
    const int mm = read_int(v, pos + 3, 2);
    pos += 5;
    int ss = 0;
    if (pos < v.size() && v[pos] == ':') {
      ss = read_int(v, pos + 1, 2);
      pos += 3;
      if (pos < v.size() && (v[pos] == '.' || v[pos] == ',')) {
        ++pos;
        while (pos < v.size() && std::isdigit(static_cast<unsigned char>(v[pos]))) ++pos;
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) throw std::invalid_argument("time out of range in '" + t + "'");
    out += hours{hh} + minutes{mm} + seconds{ss};
    if (pos < v.size()) {
      if (v[pos] == 'Z' || v[pos] == 'z') {
        ++pos;
      } else if (v[pos] == '+' || v[pos] == '-') {
        const int sign = v[pos] == '-' ? -1 : 1;
        const int oh = read_int(v, pos + 1, 2);
        std::size_t next = pos + 3;
        if (next < v.size() && v[next] == ':') ++next;
        const int om = read_int(v, next, 2);
        out -= minutes{sign * (oh * 60 + om)};
        pos = next + 2;
      }
    }
  }
  if (pos != v.size()) throw std::invalid_argument("unparseable timestamp '" + t + "'");
  return out;
}

RawPost parse_post(std::string_view json_line) {
  const json obj = json::parse(json_line.begin(), json_line.end());
  if (!obj.is_object()) throw std::invalid_argument("post is not a JSON object");
  RawPost post;
  post.id = json_string(obj, {"id_str", "id"});
  if (post.id.empty()) throw std::invalid_argument("post has no id");
  post.text = json_string(obj, {"full_text", "text"});
  const std::string created = json_string(obj, {"created_at"});
  if (created.empty()) throw std::invalid_argument("post " + post.id + " has no created_at");
  post.created_at = parse_timestamp(created);
  post.latitude = json_number(obj, {"latitude", "lat"});
  post.longitude = json_number(obj, {"longitude", "lon", "lng"});
  if (const auto it = obj.find("place"); it != obj.end() && !it->is_null()) {
    if (it->is_string()) {
      post.place = it->get<std::string>();
    } else if (it->is_object()) {
      const std::string name = json_string(*it, {"full_name", "name"});
      if (!name.empty()) post.place = name;
    }
  }
  return post;
}

GeoBox parse_bbox(std::string_view s) {
  std::array<double, 4> v{};
  std::size_t start = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t end = i < 3 ? s.find(',', start) : s.size();
    if (end == std::string_view::npos) throw std::invalid_argument("bbox needs four comma-separated numbers");
    const std::string part = trim(s.substr(start, end - start));
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size())
      throw std::invalid_argument("bad bbox component '" + part + "'");
    start = end + 1;
  }
  GeoBox box{v[0], v[1], v[2], v[3]};
  if (!(box.lat_min < box.lat_max) || !(box.lon_min < box.lon_max))
    throw std::invalid_argument("bbox minimums must be below maximums");
  return box;
}

bool geo_filter(const RawPost& post, const GeoBox& box, bool allow_place) {
  if (post.latitude && post.longitude) {
    return *post.latitude >= box.lat_min && *post.latitude <= box.lat_max && *post.longitude >= box.lon_min &&
           *post.longitude <= box.lon_max;
  }
  return allow_place && post.place && !trim(*post.place).empty();
}

bool date_filter(const RawPost& post, const DateRange& range) {
  const Day d = floor<days>(post.created_at);
  return d >= range.first && d <= range.last;
}

std::string_view keyword_group_name(KeywordGroup g) {
  switch (g) {
    case KeywordGroup::BlackLivesMatter: return "BlackLivesMatter";
    case KeywordGroup::AllBlueLivesMatter: return "AllBlueLivesMatter";
    case KeywordGroup::DefundThePolice: return "DefundThePolice";
  }
  return "BlackLivesMatter";
}

KeywordGroup parse_keyword_group(std::string_view s) {
  for (auto g : kKeywordGroups)
    if (text::lowercase(s) == text::lowercase(keyword_group_name(g))) return g;
  throw std::invalid_argument("unknown keyword group '" + std::string(s) + "'");
}

Keyword make_keyword(std::string_view spec, std::optional<KeywordGroup> group) {
  std::string t = trim(spec);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = trim(std::string_view(t).substr(1, t.size() - 2));
  Keyword kw;
  kw.text = t;
  kw.tokens = text::tokenize(text::normalize_text(t));
  if (kw.tokens.empty()) throw std::invalid_argument("keyword '" + t + "' has no tokens");
  if (!t.empty() && t.front() == '#' && kw.tokens.size() == 1) {
    kw.kind = KeywordKind::Hashtag;
  } else if (kw.tokens.size() == 1) {
    kw.kind = KeywordKind::Word;
  } else {
    kw.kind = KeywordKind::Phrase;
  }
  const auto g = group ? group : infer_group(kw.tokens);
  if (!g) throw std::invalid_argument("cannot infer keyword group for '" + t + "'; give one after a tab");
  kw.group = *g;
  return kw;
}

std::vector<Keyword> default_keywords() {
  std::vector<Keyword> out;
  for (const char* k : {"#blacklivesmatter", "blm", "#blm", "\"black lives matter\"", "#defundthepolice",
                        "\"all lives matter\"", "\"defund the police\"", "#allivesmatter", "#bluelivesmatter"})
    out.push_back(make_keyword(k));
  return out;
}

std::vector<Keyword> load_keywords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read keywords file " + path.string());
  std::vector<Keyword> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.rfind("//", 0) == 0) continue;
    const auto tab = t.find('\t');
    if (tab == std::string::npos) {
      out.push_back(make_keyword(t));
    } else {
      out.push_back(make_keyword(t.substr(0, tab), parse_keyword_group(trim(std::string_view(t).substr(tab + 1)))));
    }
  }
  if (out.empty()) throw std::runtime_error("keywords file " + path.string() + " lists no keywords");
  return out;
}

KeywordMatch match_keywords(std::span<const std::string> tokens, std::span<const Keyword> keywords) {
  std::unordered_set<std::string_view> present(tokens.begin(), tokens.end());
  KeywordMatch m;
  std::array<bool, kKeywordGroupCount> hit{};
  for (const auto& kw : keywords) {
    bool ok = false;
    if (kw.tokens.size() == 1) {
      ok = present.count(kw.tokens[0]) > 0;
    } else {
      ok = std::search(tokens.begin(), tokens.end(), kw.tokens.begin(), kw.tokens.end()) != tokens.end();
    }
    if (ok) {
      m.matched.push_back(kw.text);
      hit[static_cast<std::size_t>(kw.group)] = true;
    }
  }
  for (auto g : {KeywordGroup::BlackLivesMatter, KeywordGroup::DefundThePolice, KeywordGroup::AllBlueLivesMatter}) {
    if (hit[static_cast<std::size_t>(g)]) {
      m.group = g;
      break;
    }
  }
  return m;
}

DedupResult dedup(std::vector<Document> documents) {
  DedupResult r;
  std::unordered_set<std::string> seen;
  for (auto& d : documents) {
    const auto g = static_cast<std::size_t>(d.keyword_group);
    ++r.total_per_group[g];
    if (!seen.insert(d.normalized_text).second) continue;
    ++r.unique_per_group[g];
    r.unique.push_back(std::move(d));
  }
  return r;
}

DailySeries daily_counts(std::span<const Document> documents, const DateRange& range) {
  DailySeries s;
  const std::size_t n = range.days();
  s.days.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.days.push_back(range.first + days{static_cast<int>(i)});
  s.per_group.assign(n, GroupCounts{});
  s.total.assign(n, 0);
  for (const auto& d : documents) {
    if (d.day < range.first || d.day > range.last) continue;
    const auto i = static_cast<std::size_t>((d.day - range.first).count());
    ++s.per_group[i][static_cast<std::size_t>(d.keyword_group)];
    ++s.total[i];
  }
  return s;
}

}  // namespace moralaxis
