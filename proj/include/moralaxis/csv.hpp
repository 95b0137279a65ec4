#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moralaxis::csv {

/// Reads one logical record (quoted fields may span lines). Returns nullopt at EOF.
/// Throws std::runtime_error on an unterminated quote.
std::optional<std::vector<std::string>> read_record(std::istream& in);

/// Splits a single-line record; "" inside a quoted field is a literal quote.
std::vector<std::string> split_line(std::string_view line);

/// Quotes the field if it contains a comma, quote, or line break.
std::string escape(std::string_view field);

}  // namespace moralaxis::csv
