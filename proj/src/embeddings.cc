#include "inflect/embeddings.h"

#include <charconv>
#include <fstream>

#include "inflect/errors.h"
#include "inflect/text.h"

namespace inflect {

namespace {

bool ParseUnsigned(const std::string& s, size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void EmbeddingTable::Insert(std::string word, std::vector<double> vector) {
  if (vector.size() != dim_) throw ShapeError("embedding of wrong dimension for " + word);
  vectors_.insert_or_assign(std::move(word), std::move(vector));
}

std::optional<std::span<const double>> EmbeddingTable::Find(const std::string& word) const {
  auto it = vectors_.find(word);
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

EmbeddingTable LoadEmbeddings(std::istream& in, size_t expected_dim) {
  EmbeddingTable table(expected_dim);
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(StripLineEnd(raw));
    if (fields.empty()) continue;
    size_t count = 0, dim = 0;
    if (line_no == 1 && fields.size() == 2 && ParseUnsigned(fields[0], count) &&
        ParseUnsigned(fields[1], dim)) {
      if (dim != expected_dim) {
        throw FormatError("header declares dimension " + fields[1] + ", expected " +
                              std::to_string(expected_dim),
                          line_no);
      }
      continue;
    }
    if (fields.size() - 1 != expected_dim) {
      throw FormatError("vector has " + std::to_string(fields.size() - 1) + " values, expected " +
                            std::to_string(expected_dim),
                        line_no);
    }
    std::vector<double> values(expected_dim);
    for (size_t i = 0; i < expected_dim; ++i) {
      const std::string& f = fields[i + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw FormatError("bad number '" + f + "'", line_no);
      }
    }
    table.Insert(NormalizeNfc(fields[0]), std::move(values));
  }
  return table;
}

EmbeddingTable LoadEmbeddingsFile(const std::string& path, size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return LoadEmbeddings(in, expected_dim);
}

}  // namespace inflect
