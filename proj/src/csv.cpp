#include "moralaxis/csv.hpp"

#include <sstream>
#include <stdexcept>

namespace moralaxis::csv {

std::optional<std::vector<std::string>> read_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (true) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c != '\r' || i + 1 != line.size()) {
        field.push_back(c);
      }
    }
    if (!quoted) break;
    if (!std::getline(in, line)) throw std::runtime_error("unterminated quoted CSV field");
    field.push_back('\n');
  }
  fields.push_back(std::move(field));
  return fields;
}

std::vector<std::string> split_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  auto rec = read_record(in);
  return rec ? *rec : std::vector<std::string>{std::string()};
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace moralaxis::csv
