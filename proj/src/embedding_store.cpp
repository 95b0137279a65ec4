#include "moralaxis/embedding_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "moralaxis/text.hpp"

namespace moralaxis {

namespace {

bool needs_lowering(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (u >= 'A' && u <= 'Z');
  });
}

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string key_of(std::string_view term) {
  std::string t = trimmed(term);
  return needs_lowering(t) ? text::lowercase(t) : t;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::string source_path)
    : dimension_(dimension), source_path_(std::move(source_path)) {
  if (dimension_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::size_t EmbeddingTable::slot(std::string_view term) const {
  const auto it = needs_lowering(term) ? index_.find(key_of(term)) : index_.find(std::string(term));
  return it == index_.end() ? raw_.size() : it->second;
}

bool EmbeddingTable::insert(std::string_view term, std::span<const double> vec) {
  if (vec.size() != dimension_)
    throw std::invalid_argument("vector for '" + std::string(term) + "' has length " + std::to_string(vec.size()) +
                                ", expected " + std::to_string(dimension_));
  const double n = norm(vec);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("zero or non-finite vector for '" + std::string(term) + "'");
  std::string key = key_of(term);
  if (key.empty()) throw std::invalid_argument("empty embedding term");
  if (index_.count(key)) return false;
  std::vector<double> unit(vec.begin(), vec.end());
  for (double& x : unit) x /= n;
  index_.emplace(key, raw_.size());
  terms_.push_back(std::move(key));
  raw_.emplace_back(vec.begin(), vec.end());
  unit_.push_back(std::move(unit));
  return true;
}

const std::vector<double>* EmbeddingTable::find(std::string_view term) const {
  const std::size_t i = slot(term);
  return i < raw_.size() ? &raw_[i] : nullptr;
}

const std::vector<double>* EmbeddingTable::find_unit(std::string_view term) const {
  const std::size_t i = slot(term);
  return i < unit_.size() ? &unit_[i] : nullptr;
}

EmbeddingTable EmbeddingTable::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  EmbeddingTable out(dimension_, source_path_);
  out.report_ = report_;
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    std::vector<double> v = raw_[i];
    for (double& x : v) x *= factor;
    out.insert(terms_[i], v);
  }
  return out;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const std::unordered_set<std::string>* vocab_filter) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read embeddings file " + path.string());

  EmbeddingLoadReport report;
  std::optional<EmbeddingTable> table;
  std::size_t declared_dim = 0;
  std::string line;
  std::vector<double> components;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    ++report.lines_read;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && is_unsigned_integer(fields[0]) && is_unsigned_integer(fields[1])) {
      report.header_seen = true;
      declared_dim = std::stoul(std::string(fields[1]));
      continue;
    }
    if (fields.size() < 2) {
      ++report.malformed;
      continue;
    }

    const std::size_t dim = fields.size() - 1;
    const std::size_t expected = table ? table->dimension() : declared_dim;
    if (expected != 0 && dim != expected)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": dimension " + std::to_string(dim) +
                               " does not match " + std::to_string(expected));

    components.assign(dim, 0.0);
    bool ok = true;
    for (std::size_t j = 0; j < dim && ok; ++j) ok = parse_double(fields[j + 1], components[j]);
    if (!ok || !(norm(components) > 0.0)) {
      ++report.malformed;
      continue;
    }
    if (!table) table.emplace(dim, path.string());

    const std::string key = key_of(fields[0]);
    if (vocab_filter && !vocab_filter->count(key)) {
      ++report.filtered;
      continue;
    }
    if (table->insert(key, components)) {
      ++report.accepted;
    } else {
      ++report.duplicates;
    }
  }

  if (!table || table->size() == 0) throw std::runtime_error("no embedding vectors retained from " + path.string());
  table->report_ = report;
  return std::move(*table);
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
  const double nu = norm(u);
  const double nv = norm(v);
  if (!(nu > 0.0) || !(nv > 0.0)) throw std::invalid_argument("cosine: zero-norm input");
  const double c = dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

double cosine_unit(std::span<const double> u_unit, std::span<const double> v_unit) {
  return std::clamp(dot(u_unit, v_unit), -1.0, 1.0);
}

Centroid centroid(std::span<const std::string> terms, const EmbeddingTable& table) {
  Centroid c;
  c.requested = terms.size();
  std::vector<std::pair<std::string, const std::vector<double>*>> hits;
  for (const auto& t : terms) {
    if (const auto* v = table.find(t)) hits.emplace_back(t, v);
  }
  if (hits.empty()) throw std::invalid_argument("centroid: none of the terms resolve in the embedding table");
  // Fixed summation order makes the result independent of input order.
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  c.vector.assign(table.dimension(), 0.0);
  for (const auto& [term, v] : hits)
    for (std::size_t j = 0; j < v->size(); ++j) c.vector[j] += (*v)[j];
  for (double& x : c.vector) x /= static_cast<double>(hits.size());
  c.resolved = hits.size();
  return c;
}

}  // namespace moralaxis
