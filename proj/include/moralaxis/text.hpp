#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace moralaxis::text {

/// Unicode-aware lowercase of UTF-8 text (root locale).
std::string lowercase(std::string_view utf8);

/// NFKC, lowercase, drop URLs and @-mentions, strip '#' from hashtags,
/// collapse whitespace runs to one space, trim.
std::string normalize_text(std::string_view raw);

/// Splits on non-alphanumeric boundaries. An apostrophe between two
/// alphanumerics stays inside the token. Tokens shorter than two code
/// points are dropped.
std::vector<std::string> tokenize(std::string_view normalized);

}  // namespace moralaxis::text
