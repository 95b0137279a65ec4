#include "moralaxis/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace moralaxis::text {

namespace {

std::u32string to_u32(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::string to_utf8(std::u32string_view s) {
  icu::UnicodeString u;
  for (char32_t c : s) u.append(static_cast<UChar32>(c));
  std::string out;
  u.toUTF8String(out);
  return out;
}

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)) != 0; }
bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }
bool is_handle_char(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') || c == U'_';
}

bool starts_with_at(std::u32string_view s, std::size_t i, std::u32string_view prefix) {
  return s.substr(i, prefix.size()) == prefix;
}

}  // namespace

std::string lowercase(std::string_view utf8) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string normalize_text(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFKC normalizer unavailable");

  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString normalized = nfkc->normalize(u, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFKC normalization failed");
  normalized.toLower(icu::Locale::getRoot());
  const std::u32string s = to_u32(normalized);

  // URLs, mentions and hashtag markers; whitespace handled in the second pass.
  std::u32string stripped;
  stripped.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const bool boundary = i == 0 || !is_alnum(s[i - 1]);
    if (boundary && (starts_with_at(s, i, U"http://") || starts_with_at(s, i, U"https://") ||
                     starts_with_at(s, i, U"www."))) {
      while (i < s.size() && !is_space(s[i])) ++i;
      continue;
    }
    if (s[i] == U'@' && boundary && i + 1 < s.size() && is_handle_char(s[i + 1])) {
      ++i;
      while (i < s.size() && is_handle_char(s[i])) ++i;
      continue;
    }
    if (s[i] == U'#' && i + 1 < s.size() && is_alnum(s[i + 1])) {
      ++i;
      continue;
    }
    stripped.push_back(s[i]);
    ++i;
  }

  std::u32string out;
  out.reserve(stripped.size());
  bool pending_space = false;
  for (char32_t c : stripped) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return to_utf8(out);
}

std::vector<std::string> tokenize(std::string_view normalized) {
  const std::u32string s =
      to_u32(icu::UnicodeString::fromUTF8(icu::StringPiece(normalized.data(), static_cast<int32_t>(normalized.size()))));
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (current.size() >= 2) tokens.push_back(to_utf8(current));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (is_alnum(c)) {
      current.push_back(c);
    } else if (c == U'\'' && !current.empty() && i + 1 < s.size() && is_alnum(s[i + 1])) {
      current.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace moralaxis::text
